use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::element::unit;
use crate::arith::{factorize, KFactorization, ZkRational};
use crate::error::{Error, Result};
use crate::numeric::{self, Real};

/// Largest weight numerator or denominator accepted for multiplicative
/// characters; weights are factored by trial division.
pub const MAX_WEIGHT: u64 = 1_000_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CharacterKind {
    /// `ρ(z) = Σ q_i z_i`.
    Linear(Vec<BigRational>),
    /// `ρ(z) = -log ∏ w_i^{z_i}` with positive rational weights.
    Mult(Vec<BigRational>),
}

/// A nonzero homomorphism `ρ: Z^n → R` whose sign tests are exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    kind: CharacterKind,
    name: Option<String>,
}

/// The constant `C_ρ = max_i |ρ(t_i)|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CRho {
    Rational(BigRational),
    /// `log W` for the rational `W > 1`.
    Log(BigRational),
}

impl CRho {
    pub fn to_f64(&self) -> f64 {
        match self {
            CRho::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            CRho::Log(w) => numeric::to_f64(&numeric::ln_rational(w, 80)),
        }
    }
}

impl fmt::Display for CRho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CRho::Rational(q) => write!(f, "{q}"),
            CRho::Log(w) => write!(f, "log({w})"),
        }
    }
}

/// Positive-scaling class of a character, in a canonical normal form.
///
/// Linear classes are primitive integer vectors. Multiplicative characters
/// whose values span a one-dimensional `Q`-space are rewritten as linear
/// classes; the rest keep their prime exponent matrix divided by its content.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharacterClass {
    Linear(Vec<BigInt>),
    Mult {
        primes: Vec<u64>,
        exps: Vec<Vec<i64>>,
    },
}

impl CharacterClass {
    pub fn label(&self) -> String {
        match self {
            CharacterClass::Linear(v) => format!("[{}]", join(v.iter())),
            CharacterClass::Mult { .. } => {
                let ws: Vec<String> = self.weights().iter().map(rat_string).collect();
                format!("mult[{}]", ws.join(","))
            }
        }
    }

    fn weights(&self) -> Vec<BigRational> {
        match self {
            CharacterClass::Linear(_) => Vec::new(),
            CharacterClass::Mult { primes, exps } => exps
                .iter()
                .map(|row| {
                    let mut w = BigRational::one();
                    for (p, e) in primes.iter().zip(row) {
                        w *= BigRational::from_integer(BigInt::from(*p)).pow(*e as i32);
                    }
                    w
                })
                .collect(),
        }
    }

    /// A character in this class.
    pub fn representative(&self) -> Character {
        match self {
            CharacterClass::Linear(v) => Character {
                kind: CharacterKind::Linear(
                    v.iter()
                        .map(|c| BigRational::from_integer(c.clone()))
                        .collect(),
                ),
                name: None,
            },
            CharacterClass::Mult { .. } => Character {
                kind: CharacterKind::Mult(self.weights()),
                name: None,
            },
        }
    }

    /// JSON form: an integer array for linear classes, a character object
    /// otherwise.
    pub fn to_json(&self) -> Value {
        match self {
            CharacterClass::Linear(v) => Value::Array(v.iter().map(int_json).collect()),
            CharacterClass::Mult { .. } => self.representative().to_json(),
        }
    }
}

impl fmt::Display for CharacterClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn join<T: ToString>(it: impl Iterator<Item = T>) -> String {
    it.map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn rat_string(q: &BigRational) -> String {
    ZkRational::from_big(q.clone()).to_string()
}

fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn rat_pow(q: &BigRational, e: i64) -> BigRational {
    q.pow(e as i32)
}

/// `∏ w_i^{z_i}` as an exact rational.
fn weight_product(ws: &[BigRational], z: &[i64]) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (w, &e) in ws.iter().zip(z) {
        if e == 0 {
            continue;
        }
        let p = rat_pow(w, e.abs());
        if e > 0 {
            num *= p.numer();
            den *= p.denom();
        } else {
            num *= p.denom();
            den *= p.numer();
        }
    }
    BigRational::new(num, den)
}

/// `max(x, 1/x)` for positive `x`.
fn at_least_one(x: BigRational) -> BigRational {
    if x >= BigRational::one() {
        x
    } else {
        x.recip()
    }
}

fn factor_weight(w: &BigRational) -> Result<Vec<(u64, i64)>> {
    let mut out: Vec<(u64, i64)> = Vec::new();
    for (part, sign) in [(w.numer(), 1i64), (w.denom(), -1i64)] {
        let v = part
            .to_u64()
            .filter(|v| *v <= MAX_WEIGHT)
            .ok_or_else(|| Error::InvalidCharacter(format!("weight {w} is too large")))?;
        if v >= 2 {
            for pp in factorize(v)?.primes() {
                out.push((pp.prime, sign * pp.exp as i64));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Rank of an integer matrix, by exact elimination.
fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| BigRational::from_integer((*x).into()))
                .collect()
        })
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rk = 0;
    for c in 0..cols {
        let Some(piv) = (rk..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rk, piv);
        let pivot = m[rk].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rk && !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, p) in row.iter_mut().zip(&pivot).skip(c) {
                    *x -= &f * p;
                }
            }
        }
        rk += 1;
    }
    rk
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

impl Character {
    pub fn linear(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidCharacter("identically zero".into()));
        }
        Ok(Character {
            kind: CharacterKind::Linear(coeffs),
            name: None,
        })
    }

    pub fn linear_int(coeffs: &[i64]) -> Result<Self> {
        Self::linear(
            coeffs
                .iter()
                .map(|c| BigRational::from_integer((*c).into()))
                .collect(),
        )
    }

    pub fn mult(weights: Vec<BigRational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidCharacter("no weights".into()));
        }
        for w in &weights {
            if !w.is_positive() {
                return Err(Error::InvalidCharacter(format!(
                    "weight {w} is not positive"
                )));
            }
            factor_weight(w)?;
        }
        if weights.iter().all(|w| w.is_one()) {
            return Err(Error::InvalidCharacter("identically zero".into()));
        }
        Ok(Character {
            kind: CharacterKind::Mult(weights),
            name: None,
        })
    }

    /// `ρ_i^+`, projection onto the 0-based coordinate `i`.
    pub fn plus(n: usize, i: usize) -> Self {
        let mut c = Self::linear_int(&unit(n, i, 1)).expect("nonzero");
        c.name = Some(format!("plus{}", i + 1));
        c
    }

    /// `ρ_-`, with `ρ_-(t_i) = -m_i log p_i`.
    pub fn minus(fact: &KFactorization) -> Self {
        let ws = (0..fact.n())
            .map(|i| BigRational::from_integer(fact.prime_power(i).into()))
            .collect();
        let mut c = Self::mult(ws).expect("weights at least 2");
        c.name = Some("minus".into());
        c
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn kind(&self) -> &CharacterKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            CharacterKind::Linear(v) | CharacterKind::Mult(v) => v.len(),
        }
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() == n {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: n,
                got: self.dim(),
            })
        }
    }

    /// Exact sign of `ρ(z)`.
    pub fn sign(&self, z: &[i64]) -> Ordering {
        match &self.kind {
            CharacterKind::Linear(q) => {
                let s: BigRational = q
                    .iter()
                    .zip(z)
                    .map(|(c, &e)| c * BigRational::from_integer(e.into()))
                    .sum();
                s.cmp(&BigRational::zero())
            }
            CharacterKind::Mult(w) => BigRational::one().cmp(&weight_product(w, z)),
        }
    }

    /// Exact comparison of `ρ(a)` with `ρ(b)`.
    pub fn cmp_values(&self, a: &[i64], b: &[i64]) -> Ordering {
        let d: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.sign(&d)
    }

    /// `ρ(t_i)` compared in absolute value, exactly.
    fn abs_at_t(&self, i: usize) -> BigRational {
        match &self.kind {
            CharacterKind::Linear(q) => q[i].abs(),
            CharacterKind::Mult(w) => at_least_one(w[i].clone()),
        }
    }

    pub fn c_rho(&self) -> CRho {
        let j = self.argmax();
        match &self.kind {
            CharacterKind::Linear(_) => CRho::Rational(self.abs_at_t(j)),
            CharacterKind::Mult(_) => CRho::Log(self.abs_at_t(j)),
        }
    }

    pub fn c_rho_f64(&self) -> f64 {
        self.c_rho().to_f64()
    }

    /// Lowest index attaining `max_i |ρ(t_i)|`.
    fn argmax(&self) -> usize {
        let mut best = 0;
        for i in 1..self.dim() {
            if self.abs_at_t(i) > self.abs_at_t(best) {
                best = i;
            }
        }
        best
    }

    /// `y = ±t_j` with `ρ(y) = C_ρ`.
    pub fn y_dir(&self) -> Vec<i64> {
        let j = self.argmax();
        let e = unit(self.dim(), j, 1);
        let s = if self.sign(&e) == Ordering::Less {
            -1
        } else {
            1
        };
        unit(self.dim(), j, s)
    }

    /// `ceil(|ρ(z)| / C_ρ)`, exactly.
    pub fn ceil_ratio(&self, z: &[i64]) -> u64 {
        let c = self.abs_at_t(self.argmax());
        match &self.kind {
            CharacterKind::Linear(q) => {
                let s: BigRational = q
                    .iter()
                    .zip(z)
                    .map(|(a, &e)| a * BigRational::from_integer(e.into()))
                    .sum();
                (s.abs() / c)
                    .ceil()
                    .to_integer()
                    .to_u64()
                    .expect("small ratio")
            }
            CharacterKind::Mult(w) => {
                let a = at_least_one(weight_product(w, z));
                let mut m = 0u64;
                let mut pw = BigRational::one();
                while pw < a {
                    pw *= &c;
                    m += 1;
                }
                m
            }
        }
    }

    /// Exact membership in `Z_ρ = {z : |ρ(z)| <= C_ρ}`.
    pub fn in_zrho(&self, z: &[i64]) -> bool {
        self.ceil_ratio(z) <= 1
    }

    pub fn eval_f64(&self, z: &[i64]) -> f64 {
        match &self.kind {
            CharacterKind::Linear(q) => q
                .iter()
                .zip(z)
                .map(|(a, &e)| a.to_f64().unwrap_or(f64::NAN) * e as f64)
                .sum(),
            CharacterKind::Mult(_) => numeric::to_f64(&self.eval_real(z, 80)),
        }
    }

    /// `ρ(z)` at `bits` of binary precision.
    pub fn eval_real(&self, z: &[i64], bits: usize) -> Real {
        match &self.kind {
            CharacterKind::Linear(q) => {
                let s: BigRational = q
                    .iter()
                    .zip(z)
                    .map(|(a, &e)| a * BigRational::from_integer(e.into()))
                    .sum();
                numeric::from_rational(&s, bits)
            }
            CharacterKind::Mult(w) => -numeric::ln_rational(&weight_product(w, z), bits),
        }
    }

    /// `ρ(t_i)` as a float.
    pub fn value_at_t(&self, i: usize) -> f64 {
        self.eval_f64(&unit(self.dim(), i, 1))
    }

    pub fn class(&self) -> CharacterClass {
        match &self.kind {
            CharacterKind::Linear(q) => {
                let l = q.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
                let ints = q
                    .iter()
                    .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
                    .collect();
                CharacterClass::Linear(primitive(ints))
            }
            CharacterKind::Mult(w) => mult_class(w),
        }
    }

    /// `ρ = cρ'` for some `c > 0`.
    pub fn equivalent(&self, other: &Character) -> bool {
        self.dim() == other.dim() && self.class() == other.class()
    }

    /// Parses `plusI` (1-based), `minus`, `linear:a,b,...`, `mult:w1,w2,...`
    /// or a JSON object.
    pub fn parse_spec(spec: &str, fact: &KFactorization) -> Result<Self> {
        let s = spec.trim();
        let n = fact.n();
        let unknown = || Error::Unknown {
            kind: "character",
            name: s.to_string(),
        };
        let ch = if s.starts_with('{') {
            let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
            Character::from_json(&v)?
        } else if s == "minus" {
            Character::minus(fact)
        } else if let Some(i) = s.strip_prefix("plus") {
            let i: usize = i.parse().map_err(|_| unknown())?;
            if i == 0 || i > n {
                return Err(unknown());
            }
            Character::plus(n, i - 1)
        } else if let Some(list) = s.strip_prefix("linear:") {
            Character::linear(parse_list(list)?)?
        } else if let Some(list) = s.strip_prefix("mult:") {
            Character::mult(parse_list(list)?)?
        } else {
            return Err(unknown());
        };
        ch.check_dim(n)?;
        Ok(ch)
    }

    pub fn to_json(&self) -> Value {
        match &self.kind {
            CharacterKind::Linear(q) => json!({
                "kind": "linear",
                "coeffs": q.iter().map(rat_json).collect::<Vec<_>>(),
            }),
            CharacterKind::Mult(w) => json!({
                "kind": "mult",
                "weights": w.iter().map(|x| {
                    let (b, e) = perfect_power(x);
                    json!([rat_string(&b), e])
                }).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("character JSON: {m}"));
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing kind"))?;
        match kind {
            "linear" => {
                let cs = v
                    .get("coeffs")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("missing coeffs"))?;
                Character::linear(cs.iter().map(rat_from_json).collect::<Result<_>>()?)
            }
            "mult" => {
                let ws = v
                    .get("weights")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("missing weights"))?;
                let ws = ws
                    .iter()
                    .map(|w| match w {
                        Value::Array(pair) if pair.len() == 2 => {
                            let b = rat_from_json(&pair[0])?;
                            let e = pair[1].as_i64().ok_or_else(|| bad("bad exponent"))?;
                            if e.unsigned_abs() > 64 {
                                return Err(bad("exponent too large"));
                            }
                            Ok(b.pow(e as i32))
                        }
                        other => rat_from_json(other),
                    })
                    .collect::<Result<_>>()?;
                Character::mult(ws)
            }
            other => Err(bad(&format!("unknown kind `{other}`"))),
        }
    }
}

fn mult_class(w: &[BigRational]) -> CharacterClass {
    let facts: Vec<Vec<(u64, i64)>> = w
        .iter()
        .map(|x| factor_weight(x).expect("validated at construction"))
        .collect();
    let mut primes: Vec<u64> = facts.iter().flatten().map(|(p, _)| *p).collect();
    primes.sort_unstable();
    primes.dedup();
    let exps: Vec<Vec<i64>> = facts
        .iter()
        .map(|f| {
            primes
                .iter()
                .map(|p| f.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e))
                .collect()
        })
        .collect();
    if rank(&exps) == 1 {
        // Every column is an integer multiple c_p of one primitive vector u,
        // so ρ = -log(∏ p^{c_p}) · u.
        let col = |j: usize| -> Vec<BigInt> { exps.iter().map(|r| BigInt::from(r[j])).collect() };
        let j0 = (0..primes.len())
            .find(|&j| exps.iter().any(|r| r[j] != 0))
            .expect("nonzero");
        let u = primitive(col(j0));
        let i0 = u.iter().position(|x| !x.is_zero()).expect("nonzero");
        let mut lam = BigRational::one();
        for (j, p) in primes.iter().enumerate() {
            let c = BigInt::from(exps[i0][j]) / &u[i0];
            lam *= BigRational::from_integer(BigInt::from(*p)).pow(c.to_i32().expect("small"));
        }
        let u = if lam > BigRational::one() {
            u.into_iter().map(|x| -x).collect()
        } else {
            u
        };
        return CharacterClass::Linear(u);
    }
    let g = exps.iter().flatten().fold(0i64, |g, x| g.gcd(x));
    let keep: Vec<usize> = (0..primes.len())
        .filter(|&j| exps.iter().any(|r| r[j] != 0))
        .collect();
    CharacterClass::Mult {
        primes: keep.iter().map(|&j| primes[j]).collect(),
        exps: exps
            .iter()
            .map(|r| keep.iter().map(|&j| r[j] / g).collect())
            .collect(),
    }
}

/// `x = b^e` with `e >= 1` maximal.
fn perfect_power(x: &BigRational) -> (BigRational, i64) {
    let f = factor_weight(x).unwrap_or_default();
    let e = f.iter().fold(0i64, |g, (_, v)| g.gcd(v));
    if e <= 1 {
        return (x.clone(), 1);
    }
    let mut b = BigRational::one();
    for (p, v) in f {
        b *= BigRational::from_integer(BigInt::from(p)).pow((v / e) as i32);
    }
    (b, e)
}

fn rat_json(q: &BigRational) -> Value {
    if q.is_integer() {
        int_json(q.numer())
    } else {
        json!(rat_string(q))
    }
}

fn rat_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| Error::Parse(format!("{n} is not an integer; use a fraction string"))),
        Value::String(s) => Ok(s.parse::<ZkRational>()?.into_big()),
        other => Err(Error::Parse(format!("expected a rational, got {other}"))),
    }
}

fn parse_list(s: &str) -> Result<Vec<BigRational>> {
    s.split(',')
        .map(|t| Ok(t.parse::<ZkRational>()?.into_big()))
        .collect()
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.name, &self.kind) {
            (Some(n), _) => f.write_str(n),
            (None, CharacterKind::Linear(q)) => {
                write!(f, "linear:{}", join(q.iter().map(rat_string)))
            }
            (None, CharacterKind::Mult(w)) => write!(f, "mult:{}", join(w.iter().map(rat_string))),
        }
    }
}

impl Serialize for Character {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Character::from_json(&v).map_err(D::Error::custom)
    }
}

pub fn equivalent_characters(a: &Character, b: &Character) -> bool {
    a.equivalent(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lin(c: &[i64]) -> Character {
        Character::linear_int(c).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn minus(k: u64) -> Character {
        Character::minus(&factorize(k).unwrap())
    }

    #[test]
    fn signs() {
        let p1 = Character::plus(2, 0);
        assert_eq!(p1.sign(&[3, -5]), Ordering::Greater);
        assert_eq!(p1.eval_f64(&[3, -5]), 3.0);
        let m = minus(6);
        assert_eq!(m.sign(&[1, 1]), Ordering::Less);
        assert!((m.eval_f64(&[1, 1]) + 6f64.ln()).abs() < 1e-12);
        assert_eq!(m.sign(&[0, 0]), Ordering::Equal);
        assert_eq!(lin(&[2, 3]).sign(&[3, -2]), Ordering::Equal);
    }

    #[test]
    fn c_rho_values() {
        assert_eq!(Character::plus(3, 1).c_rho(), CRho::Rational(rat(1, 1)));
        assert_eq!(minus(6).c_rho(), CRho::Log(rat(3, 1)));
        assert_eq!(minus(12).c_rho(), CRho::Log(rat(4, 1)));
        assert_eq!(lin(&[2, 3]).c_rho(), CRho::Rational(rat(3, 1)));
        assert_eq!(lin(&[-5, 3]).y_dir(), vec![-1, 0]);
        assert_eq!(minus(6).y_dir(), vec![0, -1]);
    }

    #[test]
    fn zrho_membership() {
        let p1 = Character::plus(2, 0);
        assert!(p1.in_zrho(&[1, -7]));
        assert!(!p1.in_zrho(&[3, -5]));
        let m = minus(6);
        assert!(m.in_zrho(&[-1, 1]));
        assert!(!m.in_zrho(&[1, 1]));
        assert_eq!(m.ceil_ratio(&[-1, -1]), 2);
    }

    #[test]
    fn equivalences() {
        assert!(lin(&[1, 0]).equivalent(&lin(&[2, 0])));
        assert!(!lin(&[1, 0]).equivalent(&lin(&[-1, 0])));
        let half = Character::linear(vec![rat(1, 2), rat(1, 3)]).unwrap();
        assert!(half.equivalent(&lin(&[3, 2])));
        // log 3 / log 2 is irrational, so no rational vector matches ρ_-.
        assert!(!minus(6).equivalent(&lin(&[-1, -2])));
        assert!(!minus(6).equivalent(&lin(&[-2, -3])));
        // Rank-one multiplicative characters are rational directions.
        let m = Character::mult(vec![rat(4, 1), rat(2, 1)]).unwrap();
        assert!(m.equivalent(&lin(&[-2, -1])));
        assert_eq!(
            m.class(),
            CharacterClass::Linear(vec![(-2).into(), (-1).into()])
        );
        let m = Character::mult(vec![rat(1, 8), rat(1, 1)]).unwrap();
        assert_eq!(m.class().label(), "[1,0]");
        // ρ_- at k = 12 scaled by 1/2.
        let half_minus = Character::mult(vec![rat(2, 1), rat(3, 1)]).unwrap();
        assert!(!half_minus.equivalent(&minus(12)));
        let sq = Character::mult(vec![rat(16, 1), rat(9, 1)]).unwrap();
        assert!(sq.equivalent(&minus(12)));
        assert_eq!(minus(12).class().label(), "mult[4,3]");
        assert_eq!(minus(6).class().label(), "mult[2,3]");
    }

    #[test]
    fn spec_parsing() {
        let f = factorize(12).unwrap();
        assert_eq!(
            Character::parse_spec("plus2", &f).unwrap(),
            Character::plus(2, 1)
        );
        assert!(Character::parse_spec("plus3", &f).is_err());
        assert!(Character::parse_spec("linear:1,2,3", &f).is_err());
        assert!(Character::parse_spec("linear:0,0", &f).is_err());
        let c = Character::parse_spec("linear:1/2,-3", &f).unwrap();
        assert_eq!(
            c.to_json(),
            json!({"kind": "linear", "coeffs": ["1/2", -3]})
        );
        let m = Character::parse_spec("minus", &f).unwrap();
        assert_eq!(
            m.to_json(),
            json!({"kind": "mult", "weights": [["2", 2], ["3", 1]]})
        );
        let back = Character::parse_spec(&m.to_json().to_string(), &f).unwrap();
        assert!(back.equivalent(&m));
        assert!(Character::parse_spec("mult:-2,3", &f).is_err());
        assert!(Character::parse_spec("bogus", &f).is_err());
    }

    fn sample_chars() -> Vec<Character> {
        vec![
            lin(&[1, 0]),
            lin(&[2, 0]),
            lin(&[0, 1]),
            lin(&[2, 3]),
            lin(&[4, 6]),
            lin(&[-1, 0]),
            minus(6),
            Character::mult(vec![rat(4, 1), rat(9, 1)]).unwrap(),
            Character::mult(vec![rat(1, 2), rat(1, 1)]).unwrap(),
            Character::mult(vec![rat(4, 1), rat(8, 1)]).unwrap(),
            lin(&[-2, -3]),
        ]
    }

    #[test]
    fn equivalence_relation() {
        let cs = sample_chars();
        for a in &cs {
            assert!(a.equivalent(a));
            for b in &cs {
                assert_eq!(a.equivalent(b), b.equivalent(a));
                for c in &cs {
                    if a.equivalent(b) && b.equivalent(c) {
                        assert!(a.equivalent(c));
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn sign_matches_high_precision(z1 in -50i64..=50, z2 in -50i64..=50, which in 0usize..4) {
            let ch = [minus(6), minus(12), lin(&[2, 3]), Character::linear(vec![rat(-1, 3), rat(5, 7)]).unwrap()][which].clone();
            let bits = numeric::bits_for_digits(200);
            let v = ch.eval_real(&[z1, z2], bits);
            let exact = ch.sign(&[z1, z2]);
            let zero = numeric::from_i64(0, bits);
            if exact == Ordering::Equal {
                let tiny = numeric::from_f64(1e-150, bits);
                prop_assert!(v.clone() < tiny.clone() && -v > -tiny);
            } else {
                prop_assert_eq!(v.partial_cmp(&zero), Some(exact));
            }
        }

        #[test]
        fn positive_rescaling_is_equivalent(a in -20i64..20, b in -20i64..20, n in 1i64..30, d in 1i64..30) {
            prop_assume!(a != 0 || b != 0);
            let c = rat(n, d);
            let base = Character::linear(vec![rat(a, 1), rat(b, 1)]).unwrap();
            let scaled = Character::linear(vec![rat(a, 1) * &c, rat(b, 1) * &c]).unwrap();
            prop_assert!(base.equivalent(&scaled));
            let neg = Character::linear(vec![rat(-a, 1), rat(-b, 1)]).unwrap();
            prop_assert!(!base.equivalent(&neg));
            let (a, b, m) = ((a % 7) as i32, (b % 7) as i32, (n % 3 + 1) as i32);
            let w = Character::mult(vec![rat(2, 1).pow(a), rat(3, 1).pow(b)]);
            if let Ok(w) = w {
                let w2 = Character::mult(vec![rat(2, 1).pow(a * m), rat(3, 1).pow(b * m)]).unwrap();
                prop_assert!(w.equivalent(&w2));
            }
        }
    }
}
