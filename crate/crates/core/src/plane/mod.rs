//! The action of `G_k` on the upper half-plane by `w ↦ λ(z) w + r`.

use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::confining::{enumerate_zk, Domain};
use crate::error::{Error, Result};
use crate::group::{lattice_box, Group, GroupElement};
use crate::numeric::{self, Real};

/// Decisions within this distance of a threshold are flagged, not made.
pub const GUARD: f64 = 1e-20;

#[derive(Clone, Debug, PartialEq)]
pub struct PlanePoint {
    pub re: Real,
    pub im: Real,
}

/// One member of the Schwarz–Milnor set with its displacement `d(i, g·i)`.
#[derive(Clone, Debug)]
pub struct SmEntry {
    pub element: GroupElement,
    pub displacement: Real,
    pub borderline: bool,
}

#[derive(Clone, Debug)]
pub struct DensityReport {
    pub gaps: Vec<Real>,
    pub max_gap: Real,
    pub log_k: Real,
    /// `max(0, max_gap - log k)`.
    pub slack: Real,
}

/// `H^2` with a working precision.
#[derive(Clone, Debug)]
pub struct Plane {
    group: Group,
    digits: usize,
    bits: usize,
}

impl Plane {
    pub fn new(group: Group, digits: usize) -> Result<Self> {
        if digits < 10 {
            return Err(Error::InvalidInput(format!(
                "precision of {digits} digits is below 10"
            )));
        }
        Ok(Plane {
            group,
            digits,
            bits: numeric::bits_for_digits(digits),
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    fn real(&self, n: i64) -> Real {
        numeric::from_i64(n, self.bits)
    }

    fn rational(&self, q: &BigRational) -> Real {
        numeric::from_rational(q, self.bits)
    }

    pub fn point(&self, re: Real, im: Real) -> Result<PlanePoint> {
        if im <= Real::ZERO {
            return Err(Error::InvalidPoint(format!(
                "imaginary part {} is not positive",
                numeric::to_decimal_string(&im, 20)
            )));
        }
        Ok(PlanePoint {
            re: re.with_precision(self.bits).value(),
            im: im.with_precision(self.bits).value(),
        })
    }

    pub fn point_exact(&self, re: &BigRational, im: &BigRational) -> Result<PlanePoint> {
        self.point(self.rational(re), self.rational(im))
    }

    /// The base point `i`.
    pub fn base(&self) -> PlanePoint {
        PlanePoint {
            re: self.real(0),
            im: self.real(1),
        }
    }

    pub fn parse_point(&self, v: &Value) -> Result<PlanePoint> {
        let part = |key: &str| -> Result<Real> {
            let s = v.get(key).and_then(Value::as_str).ok_or_else(|| {
                Error::Parse(format!("point needs a decimal string \"{key}\": {v}"))
            })?;
            numeric::parse_decimal(s, self.bits)
                .ok_or_else(|| Error::Parse(format!("bad decimal `{s}`")))
        };
        self.point(part("re")?, part("im")?)
    }

    pub fn point_json(&self, w: &PlanePoint) -> Value {
        json!({
            "re": numeric::to_decimal_string(&w.re, self.digits),
            "im": numeric::to_decimal_string(&w.im, self.digits),
        })
    }

    pub fn to_decimal(&self, x: &Real) -> String {
        numeric::to_decimal_string(x, self.digits)
    }

    /// `(r, z)·w = λ(z) w + r`.
    pub fn act(&self, g: &GroupElement, w: &PlanePoint) -> PlanePoint {
        let lambda = self.rational(&self.group.lambda(&g.z));
        let r = self.rational(g.r.as_big());
        PlanePoint {
            re: &lambda * &w.re + r,
            im: &lambda * &w.im,
        }
    }

    /// `2 asinh(|w1 - w2| / (2 sqrt(im1 im2)))`.
    pub fn distance(&self, a: &PlanePoint, b: &PlanePoint) -> Result<Real> {
        for w in [a, b] {
            if w.im <= Real::ZERO {
                return Err(Error::InvalidPoint("point below the real axis".into()));
            }
        }
        let dre = &a.re - &b.re;
        let dim = &a.im - &b.im;
        let chord = numeric::sqrt(&(&dre * &dre + &dim * &dim));
        let denom = self.real(2) * numeric::sqrt(&(&a.im * &b.im));
        Ok(self.real(2) * numeric::asinh(&(chord / denom)))
    }

    /// `cosh d(i, g·i) = 1 + (r² + (λ - 1)²) / (2λ)`, exactly.
    pub fn cosh_displacement(&self, g: &GroupElement) -> BigRational {
        let l = self.group.lambda(&g.z);
        let r = g.r.as_big();
        let one = BigRational::from_integer(1.into());
        let lm = &l - &one;
        one + (r * r + &lm * &lm) / (BigRational::from_integer(2.into()) * l)
    }

    /// `d(i, g·i)`, from the exact value of its `cosh`.
    pub fn displacement(&self, g: &GroupElement) -> Real {
        acosh(&self.rational(&self.cosh_displacement(g)))
    }

    /// `-log λ(z)`.
    pub fn busemann_exact(&self, g: &GroupElement) -> Real {
        -numeric::ln_rational(&self.group.lambda(&g.z), self.bits)
    }

    /// `d(g·i, e^T i) - d(i, e^T i)`.
    pub fn busemann_estimate(&self, g: &GroupElement, t: &Real) -> Real {
        let o = self.base();
        let c = PlanePoint {
            re: self.real(0),
            im: numeric::exp(&t.clone().with_precision(self.bits).value()),
        };
        let d1 = self.distance(&self.act(g, &o), &c).expect("valid");
        let d0 = self.distance(&o, &c).expect("valid");
        d1 - d0
    }

    /// Every enumerated `g` with `d(i, g·i) <= bound`, flagging those within
    /// [`GUARD`] of the bound. The test compares the exact `cosh` of the
    /// displacement against `cosh(bound ± GUARD)`.
    pub fn sm_generating_set(&self, bound: &Real, dom: &Domain) -> Result<Vec<SmEntry>> {
        dom.bound.validate(self.group.fact())?;
        let rs = enumerate_zk(self.group.fact(), &dom.bound);
        let zs = lattice_box(self.group.n(), dom.z_box);
        let guard = numeric::from_f64(GUARD, self.bits);
        let hi = cosh(&(bound + &guard));
        let lo = cosh(&(bound - &guard));
        let mut out = Vec::new();
        for z in &zs {
            for r in &rs {
                let g = GroupElement::new(r.clone(), z.clone());
                let c = self.rational(&self.cosh_displacement(&g));
                if c > hi {
                    continue;
                }
                let borderline = c >= lo;
                out.push(SmEntry {
                    displacement: acosh(&c),
                    element: g,
                    borderline,
                });
            }
        }
        out.sort_by(|a, b| {
            a.element
                .z
                .cmp(&b.element.z)
                .then(a.element.r.cmp(&b.element.r))
        });
        Ok(out)
    }

    /// Distance from each sample to the nearest orbit point `λ(z) i + r`
    /// with `|z_j| <= z_box` and `r ∈ k^{-exp} Z`.
    pub fn orbit_density_check(
        &self,
        samples: &[PlanePoint],
        exp: u32,
        z_box: i64,
    ) -> Result<DensityReport> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("no sample points".into()));
        }
        let scale = BigRational::from_integer((self.group.k() as i64).pow(exp).into());
        let scale_r = self.rational(&scale);
        let zs = lattice_box(self.group.n(), z_box);
        let gaps: Vec<Real> = samples
            .par_iter()
            .map(|w| {
                // Nearest grid point to re(w); neighbours cover rounding.
                let scaled = numeric::to_f64(&(&w.re * &scale_r)).round() as i64;
                let mut best: Option<Real> = None;
                for z in &zs {
                    let lambda = self.rational(&self.group.lambda(z));
                    for a in scaled - 1..=scaled + 1 {
                        let r = self.rational(&(BigRational::from_integer(a.into()) / &scale));
                        let p = PlanePoint {
                            re: r,
                            im: lambda.clone(),
                        };
                        let d = self.distance(w, &p).expect("valid");
                        if best.as_ref().is_none_or(|b| d < *b) {
                            best = Some(d);
                        }
                    }
                }
                best.expect("nonempty box")
            })
            .collect();
        let max_gap = gaps
            .iter()
            .cloned()
            .fold(self.real(0), |a, b| if b > a { b } else { a });
        let log_k = numeric::ln(&self.real(self.group.k() as i64));
        let over = &max_gap - &log_k;
        let slack = if over > Real::ZERO {
            over
        } else {
            self.real(0)
        };
        Ok(DensityReport {
            gaps,
            max_gap,
            log_k,
            slack,
        })
    }

    /// Random points with `re ∈ [0, 1]` and `im ∈ [1/k, k]` (log-uniform).
    pub fn random_points(&self, rng: &mut impl Rng, count: usize) -> Vec<PlanePoint> {
        let lk = (self.group.k() as f64).ln();
        (0..count)
            .map(|_| {
                let re = rng.gen_range(0.0..=1.0);
                let im = rng.gen_range(-lk..=lk).exp();
                PlanePoint {
                    re: numeric::from_f64(re, self.bits),
                    im: numeric::from_f64(im, self.bits),
                }
            })
            .collect()
    }

    /// `2 log k + 1`, the displacement bound of the Schwarz–Milnor set.
    pub fn sm_bound(&self) -> Real {
        self.real(2) * numeric::ln(&self.real(self.group.k() as i64)) + self.real(1)
    }
}

fn cosh(x: &Real) -> Real {
    let e = numeric::exp(x);
    let one = Real::ONE.with_precision(x.precision()).value();
    (&e + &one / &e) / numeric::from_i64(2, x.precision())
}

/// `acosh(c) = ln(c + sqrt(c² - 1))` for `c >= 1`.
fn acosh(c: &Real) -> Real {
    let one = Real::ONE.with_precision(c.precision()).value();
    numeric::ln(&(c + numeric::sqrt(&(c * c - one))))
}
