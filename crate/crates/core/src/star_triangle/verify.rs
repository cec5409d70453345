//! Exact enumeration check of the star–triangle coupling.
//!
//! All eight input configurations are weighted by the product measure and
//! pushed through the kernel branch by branch. The pushforward of the triangle
//! measure `P^△_p` under `T` is compared with the star measure `P^⬡_{1−p}`, and
//! the pushforward of the star measure under `S` with the triangle measure.
//! Branch weights are used as given (not renormalised), so off the critical
//! surface the pushforward has the wrong total mass and the check fails.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::kernel::{s_branches, t_branches, Bits3, Weight};
use crate::criticality::{kappa_triangle, kappa_triangle_exact, rat_to_f64};

/// Tolerance used by the floating-point mode.
pub const FLOAT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingReport {
    pub p: [f64; 3],
    pub kappa: f64,
    /// Largest total-variation distance of the two pushforwards from their targets.
    pub tv_distance: f64,
    /// The laws of the connectivity partition of the outer vertices agree,
    /// and every branch preserves both primal and dual connectivity.
    pub connectivity_match: bool,
    pub exact: bool,
}

impl CouplingReport {
    pub fn matches(&self) -> bool {
        self.connectivity_match && if self.exact { self.tv_distance == 0.0 } else { self.tv_distance <= FLOAT_TOL }
    }
}

fn configs() -> impl Iterator<Item = Bits3> {
    (0u8..8).map(|m| [m & 1 != 0, m & 2 != 0, m & 4 != 0])
}

fn product_weight<W: Weight>(bits: Bits3, open_prob: &[W; 3]) -> W {
    let mut w = W::one();
    for i in 0..3 {
        w = w * if bits[i] {
            open_prob[i].clone()
        } else {
            W::one() - open_prob[i].clone()
        };
    }
    w
}

/// Connectivity partition of the outer vertices, as three pair indicators
/// `[1~2, 0~2, 0~1]` (pair `i` is the pair not containing `i`).
fn closure(mut pairs: [bool; 3]) -> [bool; 3] {
    if pairs.iter().filter(|&&b| b).count() >= 2 {
        pairs = [true; 3];
    }
    pairs
}

fn triangle_partition(tri: Bits3) -> [bool; 3] {
    closure(tri)
}

fn star_partition(star: Bits3) -> [bool; 3] {
    // Outer vertices j, k are joined iff both their arms are open.
    closure([star[1] && star[2], star[0] && star[2], star[0] && star[1]])
}

/// Dual partition of the three outer faces. Face `i` lies beyond triangle
/// edge `i`, i.e. in the sector between star arms `j` and `k`.
fn triangle_dual_partition(tri: Bits3) -> [bool; 3] {
    // Faces j, k meet through the triangle's interior iff edges j and k are closed.
    closure([!tri[1] && !tri[2], !tri[0] && !tri[2], !tri[0] && !tri[1]])
}

fn star_dual_partition(star: Bits3) -> [bool; 3] {
    // Adjacent sectors j, k are separated only by arm i.
    closure([!star[0], !star[1], !star[2]])
}

fn partition_index(p: [bool; 3]) -> usize {
    p[0] as usize | (p[1] as usize) << 1 | (p[2] as usize) << 2
}

struct Analysis<W> {
    tv: W,
    laws_agree: bool,
    branches_preserve: bool,
}

fn analyse<W: Weight>(p: &[W; 3], equal: impl Fn(&W, &W) -> bool) -> Analysis<W> {
    let one = W::one();
    let star_open = [one.clone() - p[0].clone(), one.clone() - p[1].clone(), one - p[2].clone()];
    let two = W::one() + W::one();

    let mut branches_preserve = true;
    let mut push_t = vec![W::zero(); 8];
    let mut push_s = vec![W::zero(); 8];
    let mut tri_law = vec![W::zero(); 8];
    let mut star_law = vec![W::zero(); 8];
    for c in configs() {
        let wt = product_weight(c, p);
        let ws = product_weight(c, &star_open);
        tri_law[partition_index(triangle_partition(c))] =
            tri_law[partition_index(triangle_partition(c))].clone() + wt.clone();
        star_law[partition_index(star_partition(c))] =
            star_law[partition_index(star_partition(c))].clone() + ws.clone();
        for (out, w) in t_branches(c, p) {
            if !w.is_zero() {
                branches_preserve &= star_partition(out) == triangle_partition(c)
                    && star_dual_partition(out) == triangle_dual_partition(c);
            }
            let idx = out.iter().enumerate().fold(0, |a, (i, &b)| a | (b as usize) << i);
            push_t[idx] = push_t[idx].clone() + wt.clone() * w;
        }
        for (out, w) in s_branches(c, p) {
            if !w.is_zero() {
                branches_preserve &= triangle_partition(out) == star_partition(c)
                    && triangle_dual_partition(out) == star_dual_partition(c);
            }
            let idx = out.iter().enumerate().fold(0, |a, (i, &b)| a | (b as usize) << i);
            push_s[idx] = push_s[idx].clone() + ws.clone() * w;
        }
    }
    let tv = |push: &[W], target: &[W; 3]| -> W {
        let mut acc = W::zero();
        for (idx, c) in configs().enumerate() {
            acc = acc + (push[idx].clone() - product_weight(c, target)).abs();
        }
        acc / two.clone()
    };
    let tv_t = tv(&push_t, &star_open);
    let tv_s = tv(&push_s, p);
    let laws_agree = tri_law.iter().zip(&star_law).all(|(a, b)| equal(a, b));
    Analysis {
        tv: if tv_t > tv_s { tv_t } else { tv_s },
        laws_agree,
        branches_preserve,
    }
}

/// Floating-point verification (`exact = false`), or exact verification of
/// the rational values of the given floats (`exact = true`).
pub fn verify_coupling(p: [f64; 3], exact: bool) -> CouplingReport {
    if exact {
        let rats = p.map(|v| BigRational::from_float(v).unwrap_or_else(BigRational::zero));
        return verify_coupling_exact(&rats);
    }
    let a = analyse(&p, |x, y| (x - y).abs() <= FLOAT_TOL);
    CouplingReport {
        p,
        kappa: kappa_triangle(p),
        tv_distance: a.tv,
        connectivity_match: a.laws_agree && a.branches_preserve,
        exact: false,
    }
}

/// Verification in exact rational arithmetic.
pub fn verify_coupling_exact(p: &[BigRational; 3]) -> CouplingReport {
    let a = analyse(p, |x, y| x == y);
    // Report a zero distance only when it is exactly zero.
    let mut tv = rat_to_f64(&a.tv);
    if !a.tv.is_zero() && tv == 0.0 {
        tv = f64::MIN_POSITIVE;
    }
    CouplingReport {
        p: [rat_to_f64(&p[0]), rat_to_f64(&p[1]), rat_to_f64(&p[2])],
        kappa: rat_to_f64(&kappa_triangle_exact(p)),
        tv_distance: tv,
        connectivity_match: a.laws_agree && a.branches_preserve,
        exact: true,
    }
}

/// Exact total-variation distance, for callers that need the rational itself.
pub fn exact_tv_distance(p: &[BigRational; 3]) -> BigRational {
    analyse(p, |x, y| x == y).tv
}
