use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "gk",
    version,
    about = "Computations in the groups Z[1/k] ⋊ Z^n"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Factorization of k and its full divisors.
    Factor(KArg),
    /// Base-k expansion of an element of Z[1/k], or the value of an expansion.
    Expand(ExpandArgs),
    /// Product of two group elements.
    Mul(MulArgs),
    /// Inverse of a group element.
    Inv(InvArgs),
    /// Confining-subset verifiers.
    #[command(subcommand)]
    Confining(ConfiningCommand),
    /// Word length with respect to Q ∪ Z_ρ.
    Wordlen(WordlenArgs),
    /// Rewrites a word into τ-form.
    Normalform(NormalformArgs),
    /// The action on the Bass–Serre tree T_i.
    #[command(subcommand)]
    Tree(TreeCommand),
    /// The action on the upper half-plane.
    #[command(subcommand)]
    Plane(PlaneCommand),
    /// The poset of canonical hyperbolic structures.
    Poset(PosetArgs),
    /// The complement of the BNS invariant, or membership of one character.
    Bns(BnsArgs),
    /// Sampled four-point δ on an orbit.
    Delta(DeltaArgs),
}

#[derive(Args, Debug)]
pub struct KArg {
    #[arg(long)]
    pub k: u64,
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    #[arg(long)]
    pub k: u64,
    /// Rational `a/b` to expand.
    #[arg(
        long,
        conflicts_with = "digits",
        required_unless_present = "digits",
        allow_hyphen_values = true
    )]
    pub value: Option<String>,
    /// Base-k string to evaluate.
    #[arg(long, allow_hyphen_values = true)]
    pub digits: Option<String>,
}

#[derive(Args, Debug)]
pub struct MulArgs {
    #[arg(long)]
    pub k: u64,
    /// Element as JSON `{"r":"a/b","z":[..]}` or one of `e`, `a`, `tI`.
    pub g: String,
    pub h: String,
}

#[derive(Args, Debug)]
pub struct InvArgs {
    #[arg(long)]
    pub k: u64,
    pub g: String,
}

#[derive(Args, Debug, Clone)]
pub struct ContextArgs {
    #[arg(long)]
    pub k: u64,
    /// Subset name: `full`, `Q1`..`Qn`, `Qminus`, `Cminus`.
    #[arg(long)]
    pub subset: String,
    /// `plusI`, `minus`, `linear:a,b,..`, `mult:w1,w2,..` or character JSON.
    #[arg(long)]
    pub character: String,
}

#[derive(Subcommand, Debug)]
pub enum ConfiningCommand {
    /// Runs conditions (a), (b) on samples, (c) and strictness.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub ctx: ContextArgs,
    /// Numerator bound of the domain.
    #[arg(long, default_value_t = 100)]
    pub num: u64,
    /// Denominator exponent bound of the domain.
    #[arg(long, default_value_t = 3)]
    pub exp: u32,
    /// Lattice box `|z_i| <= z_box`.
    #[arg(long = "z-box", default_value_t = 4)]
    pub z_box: i64,
    /// Number of sampled `h` for condition (b).
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Seed for the condition (b) sample.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Steps searched along the ray for condition (b) and for `z_0`.
    #[arg(long, default_value_t = 64)]
    pub search: u32,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Oracle {
    Tau,
    Bfs,
    Both,
}

#[derive(Args, Debug)]
pub struct WordlenArgs {
    #[command(flatten)]
    pub ctx: ContextArgs,
    #[arg(long)]
    pub element: String,
    #[arg(long, value_enum, default_value_t = Oracle::Both)]
    pub oracle: Oracle,
    /// Lattice bound for the τ oracle.
    #[arg(long = "lattice-bound", default_value_t = 6)]
    pub lattice_bound: i64,
    #[arg(long = "q-exp", default_value_t = 3)]
    pub q_exp: u32,
    #[arg(long = "q-num", default_value_t = 500)]
    pub q_num: u64,
    #[arg(long = "z-box", default_value_t = 4)]
    pub z_box: i64,
    #[arg(long, default_value_t = 6)]
    pub depth: u32,
}

#[derive(Args, Debug)]
pub struct NormalformArgs {
    #[command(flatten)]
    pub ctx: ContextArgs,
    /// JSON file holding an array of letters `{"q":"a/b"}` / `{"z":[..]}`.
    #[arg(long)]
    pub word: std::path::PathBuf,
}

#[derive(Args, Debug)]
pub struct TreeArgs {
    #[arg(long)]
    pub k: u64,
    /// Tree index, 1-based.
    #[arg(long)]
    pub i: usize,
}

#[derive(Subcommand, Debug)]
pub enum TreeCommand {
    /// Image of a vertex `{"x":"a/b","h":h}`.
    Act {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        element: String,
        #[arg(long)]
        vertex: String,
    },
    /// Distance between two vertices.
    Dist {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        /// Also compute the distance by search in the window `h_min,h_max,exp`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        window: Option<Vec<i64>>,
    },
    /// Busemann value toward the end `h → -∞`.
    Busemann {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        element: String,
        /// Depth of the estimate; defaults to the stabilization threshold.
        #[arg(long)]
        depth: Option<u64>,
    },
    /// Elliptic or loxodromic, with translation length.
    Type {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        element: String,
    },
}

#[derive(Args, Debug)]
pub struct PlaneArgs {
    #[arg(long)]
    pub k: u64,
    #[arg(long = "precision-digits", default_value_t = 64)]
    pub precision_digits: usize,
}

#[derive(Subcommand, Debug)]
pub enum PlaneCommand {
    /// Image of a point `{"re":"..","im":".."}`.
    Act {
        #[command(flatten)]
        plane: PlaneArgs,
        #[arg(long)]
        element: String,
        #[arg(long)]
        point: String,
    },
    /// Hyperbolic distance.
    Dist {
        #[command(flatten)]
        plane: PlaneArgs,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Exact and estimated Busemann values toward ∞.
    Busemann {
        #[command(flatten)]
        plane: PlaneArgs,
        #[arg(long)]
        element: String,
        /// Height parameter `T` of the reference point `e^T i`.
        #[arg(long, default_value_t = 30)]
        t: i64,
    },
    /// Enumerated elements moving `i` by at most the bound.
    Smgen {
        #[command(flatten)]
        plane: PlaneArgs,
        /// Displacement bound; defaults to `2 log k + 1`.
        #[arg(long)]
        bound: Option<String>,
        #[arg(long, default_value_t = 20)]
        num: u64,
        #[arg(long, default_value_t = 1)]
        exp: u32,
        #[arg(long = "z-box", default_value_t = 2)]
        z_box: i64,
    },
    /// Largest distance from random points to the orbit of `i`.
    Density {
        #[command(flatten)]
        plane: PlaneArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        exp: u32,
        #[arg(long = "z-box", default_value_t = 3)]
        z_box: i64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Format {
    Dot,
    Json,
}

#[derive(Args, Debug)]
pub struct PosetArgs {
    #[arg(long)]
    pub k: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct BnsArgs {
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub character: Option<String>,
}

#[derive(Args, Debug)]
pub struct DeltaArgs {
    #[arg(long)]
    pub k: u64,
    /// `tree` or `plane`.
    #[arg(long)]
    pub model: String,
    /// Random quadruples to test.
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    /// Orbit points drawn before sampling quadruples.
    #[arg(long, default_value_t = 64)]
    pub points: usize,
}
