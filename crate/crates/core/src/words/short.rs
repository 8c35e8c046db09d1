use serde::Serialize;

use super::length::AdditiveLength;
use super::letter::WordContext;
use crate::arith::ZkRational;
use crate::group::{lattice_box, neg, sub, GroupElement};

/// Exact word length over the full generating set when it is at most 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ShortLength {
    Exact(u32),
    /// Length 4 or more.
    AtLeast4,
    /// The subset has no closed form for one of the needed sums.
    Unknown,
}

/// Middle letters of `Z Q Z` words are searched in this box around the
/// target's lattice part.
pub const ZQZ_BOX: i64 = 8;

enum Tri {
    Yes,
    No,
    Unknown,
}

fn addlen_at_most(q: &WordContext, h: &ZkRational, m: u64) -> Tri {
    match q.q.additive_length(h) {
        Some(AdditiveLength::Finite(l)) if l <= m => Tri::Yes,
        Some(_) => Tri::No,
        None => Tri::Unknown,
    }
}

/// Decides `|g| <= 3` by membership tests on every letter pattern of
/// length at most 3. The `Z Q Z` pattern is searched over [`ZQZ_BOX`].
pub fn short_length(g: &GroupElement, ctx: &WordContext) -> ShortLength {
    let group = ctx.group();
    let q = &ctx.q;
    let rho = &ctx.rho;
    let zero_z = g.z.iter().all(|c| *c == 0);
    let zero_r = g.r.is_zero();
    if zero_z && zero_r {
        return ShortLength::Exact(0);
    }
    let zl = rho.zrho_length(&g.z);
    let in_z = zl <= 1;
    let twisted = group.gamma_act(&neg(&g.z), &g.r);
    if zero_r {
        if zl <= 3 {
            return ShortLength::Exact(zl as u32);
        }
    } else if zero_z && q.contains(&g.r) {
        return ShortLength::Exact(1);
    }
    let mut unknown = false;
    let mut check = |t: Tri| match t {
        Tri::Yes => true,
        Tri::No => false,
        Tri::Unknown => {
            unknown = true;
            false
        }
    };

    // Q Q, Q Z, Z Q.
    let two = (zero_z && check(addlen_at_most(ctx, &g.r, 2)))
        || (in_z && (q.contains(&g.r) || q.contains(&twisted)));
    if two {
        return ShortLength::Exact(2);
    }
    if zero_r {
        return ShortLength::AtLeast4;
    }

    // Q Q Q, Q Q Z, Z Q Q, Q Z Z, Z Z Q, Q Z Q.
    let three = (zero_z && check(addlen_at_most(ctx, &g.r, 3)))
        || (in_z && check(addlen_at_most(ctx, &g.r, 2)))
        || (in_z && check(addlen_at_most(ctx, &twisted, 2)))
        || (zl <= 2 && (q.contains(&g.r) || q.contains(&twisted)))
        || (in_z
            && check(match q.in_twisted_sum(&g.r, &g.z) {
                Some(true) => Tri::Yes,
                Some(false) => Tri::No,
                None => Tri::Unknown,
            }));
    if three || zqz(g, ctx) {
        return ShortLength::Exact(3);
    }
    if unknown {
        ShortLength::Unknown
    } else {
        ShortLength::AtLeast4
    }
}

/// `(0, z1)(q, 0)(0, z - z1)` with both lattice letters in `Z_ρ`.
fn zqz(g: &GroupElement, ctx: &WordContext) -> bool {
    let group = ctx.group();
    let reach = g.z.iter().map(|c| c.abs()).max().unwrap_or(0) + ZQZ_BOX;
    lattice_box(group.n(), reach).into_iter().any(|z1| {
        ctx.rho.in_zrho(&z1)
            && ctx.rho.in_zrho(&sub(&g.z, &z1))
            && ctx.q.contains(&group.gamma_act(&neg(&z1), &g.r))
    })
}

/// Whether a distance `d` found over a truncation is consistent with the
/// exact answer for words of length at most 3.
pub(crate) fn consistent(short: ShortLength, d: u32) -> bool {
    match short {
        ShortLength::Exact(l) => l == d,
        ShortLength::AtLeast4 => d >= 4,
        ShortLength::Unknown => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ZkRational;
    use crate::confining::registry;
    use crate::group::{Character, Group};
    use crate::words::{word_length_bfs, Truncation};

    fn ctx(k: u64, s: &str, r: &str) -> WordContext {
        let g = Group::new(k).unwrap();
        WordContext::new(
            registry(&g).get(s).unwrap(),
            Character::parse_spec(r, g.fact()).unwrap(),
        )
        .unwrap()
    }

    fn el(r: &str, z: Vec<i64>) -> GroupElement {
        GroupElement::new(r.parse::<ZkRational>().unwrap(), z)
    }

    #[test]
    fn large_letters_are_seen() {
        let c = ctx(6, "Q1", "plus1");
        assert_eq!(
            short_length(&el("-11/3", vec![0, 0]), &c),
            ShortLength::Exact(1)
        );
        let c = ctx(6, "Qminus", "minus");
        // (0, t2)(-8/9, 0)
        assert_eq!(
            short_length(&el("-8/3", vec![0, 1]), &c),
            ShortLength::Exact(2)
        );
        assert_eq!(
            short_length(&el("3/2", vec![0, 0]), &c),
            ShortLength::Exact(2)
        );
        assert_eq!(
            short_length(&el("5/2", vec![0, 0]), &c),
            ShortLength::Exact(3)
        );
        // (0, 2 t2)(-8/9, 0)
        assert_eq!(
            short_length(&el("-8", vec![0, 2]), &c),
            ShortLength::Exact(3)
        );
    }

    #[test]
    fn agrees_with_search_on_small_elements() {
        for (s, r) in [("Qminus", "minus"), ("Q1", "plus1")] {
            let c = ctx(6, s, r);
            let t = Truncation::new(2, 40, 2, 4);
            for num in -8i64..=8 {
                for z0 in -1..=1 {
                    for z1 in -1..=1 {
                        let g = el(&format!("{num}/6"), vec![z0, z1]);
                        let b = word_length_bfs(&g, &c, &t, false).unwrap();
                        let sh = short_length(&g, &c);
                        match b.length {
                            Some(l) if l <= 3 => assert_eq!(sh, ShortLength::Exact(l), "{g}"),
                            _ => assert_eq!(sh, ShortLength::AtLeast4, "{g}"),
                        }
                    }
                }
            }
        }
    }
}
