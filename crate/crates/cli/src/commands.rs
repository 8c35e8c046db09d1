use std::fs;

use gk_core::arith::{from_base_k, to_base_k, BaseKExpansion, ZkRational};
use gk_core::confining::{
    registry, sample_zk, strictness_witness, verify_condition_a, verify_condition_b_samples,
    verify_condition_c, Domain, DEFAULT_SUMSET_BUDGET,
};
use gk_core::group::{Character, Group, GroupElement};
use gk_core::models::orbit_model;
use gk_core::numeric;
use gk_core::plane::{Plane, GUARD};
use gk_core::structures::{bns_complement, export_poset, in_bns, PosetFormat};
use gk_core::tree::{bfs_distance, Tree, TreeWindow};
use gk_core::words::{word_length_bfs, word_length_tau, Letter, Truncation, WordContext};
use gk_core::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::*;

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn parse_json(s: &str, what: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// `e`, `a`, `tI` (1-based) or `{"r":"a/b","z":[..]}`.
fn parse_element(s: &str, group: &Group) -> Result<GroupElement> {
    let t = s.trim();
    let g = match t {
        "e" | "id" => group.identity(),
        "a" => group.a(),
        _ if t.starts_with('t') => {
            let i: usize = t[1..]
                .parse()
                .map_err(|_| Error::Parse(format!("element `{t}`")))?;
            if i == 0 || i > group.n() {
                return Err(Error::Parse(format!(
                    "generator `{t}` out of range 1..={}",
                    group.n()
                )));
            }
            group.t(i - 1)
        }
        _ => {
            let v = parse_json(t, "element")?;
            serde_json::from_value(v).map_err(|e| Error::Parse(format!("element: {e}")))?
        }
    };
    group.validate(&g)?;
    Ok(g)
}

fn element_json(g: &GroupElement) -> Value {
    json!({"r": g.r, "z": g.z})
}

fn context(c: &ContextArgs) -> Result<WordContext> {
    let group = Group::new(c.k)?;
    let q = registry(&group).get(&c.subset)?;
    let rho = Character::parse_spec(&c.character, group.fact())?;
    WordContext::new(q, rho)
}

pub fn factor(a: &KArg) -> Result<String> {
    let group = Group::new(a.k)?;
    let f = group.fact();
    Ok(pretty(&json!({
        "k": f.k(),
        "n": f.n(),
        "primes": f.primes().iter().map(|p| json!({"prime": p.prime, "exp": p.exp})).collect::<Vec<_>>(),
        "full_divisors": f.full_divisors(),
    })))
}

pub fn expand(a: &ExpandArgs) -> Result<String> {
    let group = Group::new(a.k)?;
    let fact = group.fact();
    let (value, digits) = match (&a.value, &a.digits) {
        (Some(v), _) => {
            let x: ZkRational = v.parse()?;
            let x = x.checked(fact)?;
            let e = to_base_k(&x, fact)?;
            (x, e.render())
        }
        (None, Some(d)) => {
            let e = BaseKExpansion::parse(d, a.k)?;
            (from_base_k(&e, fact)?, e.render())
        }
        (None, None) => unreachable!("clap requires one of --value and --digits"),
    };
    Ok(pretty(
        &json!({"k": a.k, "value": value, "expansion": digits}),
    ))
}

pub fn mul(a: &MulArgs) -> Result<String> {
    let group = Group::new(a.k)?;
    let g = parse_element(&a.g, &group)?;
    let h = parse_element(&a.h, &group)?;
    Ok(pretty(&element_json(&group.multiply(&g, &h))))
}

pub fn inv(a: &InvArgs) -> Result<String> {
    let group = Group::new(a.k)?;
    let g = parse_element(&a.g, &group)?;
    Ok(pretty(&element_json(&group.inverse(&g))))
}

pub fn confining(c: &ConfiningCommand) -> Result<String> {
    let ConfiningCommand::Check(a) = c;
    let ctx = context(&a.ctx)?;
    let (q, rho) = (ctx.q.as_ref(), &ctx.rho);
    let dom = Domain::new(a.num, a.exp, a.z_box);
    dom.bound.validate(ctx.group().fact())?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let hs = sample_zk(&mut rng, ctx.group().fact(), &dom.bound, a.samples);
    let ra = verify_condition_a(q, rho, &dom).to_report(q, rho, &dom);
    let rb = verify_condition_b_samples(q, rho, &hs, a.search).to_report(q, rho, &dom);
    let rc = verify_condition_c(q, rho, &dom.bound, a.search, DEFAULT_SUMSET_BUDGET)?
        .to_report(q, rho, &dom);
    let rs = strictness_witness(q, rho, &dom).to_report(q, rho, &dom);
    let confining = ra.passed() && rb.passed() && rc.passed();
    let strict = confining && rs.passed();
    Ok(pretty(&json!({
        "k": a.ctx.k,
        "subset": q.name(),
        "character": rho.to_json(),
        "seed": a.seed,
        "reports": [ra, rb, rc, rs],
        "confining": confining,
        "strictly_confining": strict,
    })))
}

pub fn wordlen(a: &WordlenArgs) -> Result<String> {
    let ctx = context(&a.ctx)?;
    let g = parse_element(&a.element, ctx.group())?;
    let mut out = json!({"k": a.ctx.k, "subset": ctx.q.name(), "character": ctx.rho.to_json(), "element": element_json(&g)});
    if matches!(a.oracle, Oracle::Tau | Oracle::Both) {
        out["tau"] = serde_json::to_value(word_length_tau(&g, &ctx, a.lattice_bound)?)
            .expect("serializable");
    }
    if matches!(a.oracle, Oracle::Bfs | Oracle::Both) {
        let t = Truncation::new(a.q_exp, a.q_num, a.z_box, a.depth);
        out["bfs"] =
            serde_json::to_value(word_length_bfs(&g, &ctx, &t, true)?).expect("serializable");
    }
    if let (Some(tau), Some(bfs)) = (out.get("tau"), out.get("bfs")) {
        let agree = bfs["length"]
            .as_u64()
            .map(|l| Some(l) == tau["length"].as_u64());
        out["agree"] = json!(agree);
    }
    Ok(pretty(&out))
}

pub fn normalform(a: &NormalformArgs) -> Result<String> {
    let ctx = context(&a.ctx)?;
    let text = fs::read_to_string(&a.word)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", a.word.display())))?;
    let word: Vec<Letter> =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("word: {e}")))?;
    ctx.check_word(&word)?;
    let nf = ctx.normal_form(&word)?;
    Ok(pretty(&json!({
        "k": a.ctx.k,
        "subset": ctx.q.name(),
        "character": ctx.rho.to_json(),
        "input_length": word.len(),
        "tau1": nf.tau1,
        "tau2": nf.tau2,
        "tau3": nf.tau3,
        "length": nf.len(),
        "value": element_json(&ctx.eval_word(&nf.letters())),
    })))
}

fn tree_of(t: &TreeArgs) -> Result<Tree> {
    if t.i == 0 {
        return Err(Error::Unknown {
            kind: "tree index",
            name: "0".into(),
        });
    }
    Tree::new(Group::new(t.k)?, t.i - 1)
}

pub fn tree(c: &TreeCommand) -> Result<String> {
    let out = match c {
        TreeCommand::Act {
            tree,
            element,
            vertex,
        } => {
            let t = tree_of(tree)?;
            let g = parse_element(element, t.group())?;
            let v = t.parse_vertex(&parse_json(vertex, "vertex")?)?;
            t.vertex_json(&t.act(&g, &v))
        }
        TreeCommand::Dist { tree, u, v, window } => {
            let t = tree_of(tree)?;
            let u = t.parse_vertex(&parse_json(u, "vertex u")?)?;
            let v = t.parse_vertex(&parse_json(v, "vertex v")?)?;
            let mut out = json!({"u": t.vertex_json(&u), "v": t.vertex_json(&v), "distance": t.distance(&u, &v)});
            if let Some(w) = window {
                if w.len() != 3 {
                    return Err(Error::Parse("window is `h_min,h_max,exp`".into()));
                }
                let exp = u32::try_from(w[2])
                    .map_err(|_| Error::InvalidInput("window exponent must be >= 0".into()))?;
                let win = TreeWindow::new(&t, w[0], w[1], exp)?;
                out["bfs_distance"] = json!(bfs_distance(&t, &u, &v, &win)?);
                out["window"] = json!({"h_min": w[0], "h_max": w[1], "exp": exp});
            }
            out
        }
        TreeCommand::Busemann {
            tree,
            element,
            depth,
        } => {
            let t = tree_of(tree)?;
            let g = parse_element(element, t.group())?;
            let depth = depth.unwrap_or_else(|| t.busemann_threshold(&g));
            json!({
                "element": element_json(&g),
                "busemann": t.busemann_tree(&g),
                "estimate": t.busemann_estimate(&g, depth),
                "depth": depth,
            })
        }
        TreeCommand::Type { tree, element } => {
            let t = tree_of(tree)?;
            let g = parse_element(element, t.group())?;
            let mut out = serde_json::to_value(t.element_type(&g)).expect("serializable");
            out["translation_length"] = json!(t.translation_length(&g));
            out["element"] = element_json(&g);
            out["orbit_rate_64"] = json!(t.orbit_rate(&g, 64));
            out
        }
    };
    Ok(pretty(&out))
}

fn plane_of(p: &PlaneArgs) -> Result<Plane> {
    Plane::new(Group::new(p.k)?, p.precision_digits)
}

pub fn plane(c: &PlaneCommand) -> Result<String> {
    let (p, mut out) = match c {
        PlaneCommand::Act {
            plane,
            element,
            point,
        } => {
            let p = plane_of(plane)?;
            let g = parse_element(element, p.group())?;
            let w = p.parse_point(&parse_json(point, "point")?)?;
            let image = p.point_json(&p.act(&g, &w));
            (p, json!({"point": image}))
        }
        PlaneCommand::Dist { plane, u, v } => {
            let p = plane_of(plane)?;
            let u = p.parse_point(&parse_json(u, "point u")?)?;
            let v = p.parse_point(&parse_json(v, "point v")?)?;
            let d = p.distance(&u, &v)?;
            (p.clone(), json!({"distance": p.to_decimal(&d)}))
        }
        PlaneCommand::Busemann { plane, element, t } => {
            let p = plane_of(plane)?;
            let g = parse_element(element, p.group())?;
            let exact = p.busemann_exact(&g);
            let est = p.busemann_estimate(&g, &numeric::from_i64(*t, p.bits()));
            let out = json!({
                "element": element_json(&g),
                "exact": p.to_decimal(&exact),
                "estimate": p.to_decimal(&est),
                "t": t,
            });
            (p, out)
        }
        PlaneCommand::Smgen {
            plane,
            bound,
            num,
            exp,
            z_box,
        } => {
            let p = plane_of(plane)?;
            let b = match bound {
                Some(s) => numeric::parse_decimal(s, p.bits())
                    .ok_or_else(|| Error::Parse(format!("bound `{s}`")))?,
                None => p.sm_bound(),
            };
            let dom = Domain::new(*num, *exp, *z_box);
            let set = p.sm_generating_set(&b, &dom)?;
            let elements: Vec<Value> = set
                .iter()
                .map(|e| {
                    json!({
                        "element": element_json(&e.element),
                        "displacement": p.to_decimal(&e.displacement),
                        "borderline": e.borderline,
                    })
                })
                .collect();
            let out = json!({
                "bound": p.to_decimal(&b),
                "guard": GUARD,
                "domain": {"num": num, "exp": exp, "z_box": z_box},
                "count": elements.len(),
                "elements": elements,
            });
            (p, out)
        }
        PlaneCommand::Density {
            plane,
            samples,
            seed,
            exp,
            z_box,
        } => {
            let p = plane_of(plane)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let pts = p.random_points(&mut rng, *samples);
            let r = p.orbit_density_check(&pts, *exp, *z_box)?;
            let out = json!({
                "samples": samples,
                "seed": seed,
                "exp": exp,
                "z_box": z_box,
                "max_gap": p.to_decimal(&r.max_gap),
                "log_k": p.to_decimal(&r.log_k),
                "slack": p.to_decimal(&r.slack),
            });
            (p, out)
        }
    };
    out["k"] = json!(p.group().k());
    out["precision_digits"] = json!(p.digits());
    Ok(pretty(&out))
}

pub fn poset(a: &PosetArgs) -> Result<String> {
    let group = Group::new(a.k)?;
    let format = match a.format {
        Format::Dot => PosetFormat::Dot,
        Format::Json => PosetFormat::Json,
    };
    Ok(export_poset(group.fact(), format))
}

pub fn bns(a: &BnsArgs) -> Result<String> {
    let group = Group::new(a.k)?;
    let fact = group.fact();
    let complement: Vec<Value> = bns_complement(fact).iter().map(|c| c.to_json()).collect();
    let mut out = json!({"k": a.k, "complement": complement});
    if let Some(spec) = &a.character {
        let chi = Character::parse_spec(spec, fact)?;
        out["character"] = chi.to_json();
        out["class"] = chi.class().to_json();
        out["in_bns"] = json!(in_bns(&chi, fact)?);
    }
    Ok(pretty(&out))
}

pub fn delta(a: &DeltaArgs) -> Result<String> {
    let group = Group::new(a.k)?;
    let model = orbit_model(&a.model)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let r = model.delta(&group, a.points, a.samples, &mut rng)?;
    let mut out = serde_json::to_value(r).expect("serializable");
    out["k"] = json!(a.k);
    out["seed"] = json!(a.seed);
    Ok(pretty(&out))
}
