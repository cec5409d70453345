//! The coupled maps `T` (triangle → star) and `S` (star → triangle).
//!
//! Both are deterministic except on one input each: `T` randomises only a
//! fully closed triangle and `S` only a fully open star. Branch weights are
//! the rational functions of `p` below, divided by `P = (1−p0)(1−p1)(1−p2)`;
//! they sum to one exactly when `σ2 − 2σ3 = P`, i.e. on the critical surface.

use num_traits::{Num, Signed};

use crate::criticality::{kappa_triangle, ParamTriple, SELF_DUAL_TOL};
use crate::error::{Error, Result};

pub type Bits3 = [bool; 3];

/// Arithmetic the kernels can be evaluated in (`f64` or exact rationals).
pub trait Weight: Clone + Num + Signed + PartialOrd {}
impl<T: Clone + Num + Signed + PartialOrd> Weight for T {}

fn big_p<W: Weight>(p: &[W; 3]) -> W {
    let one = W::one();
    (one.clone() - p[0].clone()) * (one.clone() - p[1].clone()) * (one - p[2].clone())
}

fn others(i: usize) -> (usize, usize) {
    ((i + 1) % 3, (i + 2) % 3)
}

fn single(i: usize) -> Bits3 {
    let mut b = [false; 3];
    b[i] = true;
    b
}

fn all_but(i: usize) -> Bits3 {
    let mut b = [true; 3];
    b[i] = false;
    b
}

/// Output branches of `T` for a triangle configuration, with weights.
pub fn t_branches<W: Weight>(tri: Bits3, p: &[W; 3]) -> Vec<(Bits3, W)> {
    let open = tri.iter().filter(|&&b| b).count();
    match open {
        2 | 3 => vec![([true; 3], W::one())],
        1 => {
            let i = tri.iter().position(|&b| b).unwrap();
            vec![(all_but(i), W::one())]
        }
        _ => {
            let bp = big_p(p);
            let mut out = Vec::with_capacity(4);
            let all = p[0].clone() * p[1].clone() * p[2].clone();
            out.push(([false; 3], all / bp.clone()));
            for i in 0..3 {
                let (j, k) = others(i);
                let w = (W::one() - p[i].clone()) * p[j].clone() * p[k].clone();
                out.push((single(i), w / bp.clone()));
            }
            out
        }
    }
}

/// Output branches of `S` for a star configuration, with weights.
pub fn s_branches<W: Weight>(star: Bits3, p: &[W; 3]) -> Vec<(Bits3, W)> {
    let open = star.iter().filter(|&&b| b).count();
    match open {
        3 => {
            let bp = big_p(p);
            let mut out = Vec::with_capacity(4);
            let all = p[0].clone() * p[1].clone() * p[2].clone();
            out.push(([true; 3], all / bp.clone()));
            for i in 0..3 {
                let (j, k) = others(i);
                let w = p[j].clone() * p[k].clone() * (W::one() - p[i].clone());
                out.push((all_but(i), w / bp.clone()));
            }
            out
        }
        2 => {
            let k = star.iter().position(|&b| !b).unwrap();
            vec![(single(k), W::one())]
        }
        _ => vec![([false; 3], W::one())],
    }
}

/// Choose a branch with a uniform `u ∈ [0,1)`; rounding slack goes to the last branch.
fn pick(branches: &[(Bits3, f64)], u: f64) -> Bits3 {
    let mut acc = 0.0;
    for &(b, w) in branches {
        acc += w;
        if u < acc {
            return b;
        }
    }
    branches.last().unwrap().0
}

/// `T` without the self-duality check; `p` must lie on the critical surface.
#[inline]
pub fn apply_t(tri: Bits3, p: &[f64; 3], u: f64) -> Bits3 {
    match tri.iter().filter(|&&b| b).count() {
        2 | 3 => [true; 3],
        1 => [!tri[0], !tri[1], !tri[2]],
        _ => pick(&t_branches(tri, p), u),
    }
}

/// `S` without the self-duality check; `p` must lie on the critical surface.
#[inline]
pub fn apply_s(star: Bits3, p: &[f64; 3], u: f64) -> Bits3 {
    match star.iter().filter(|&&b| b).count() {
        3 => pick(&s_branches(star, p), u),
        2 => [!star[0], !star[1], !star[2]],
        _ => [false; 3],
    }
}

fn require_self_dual(p: &ParamTriple) -> Result<()> {
    p.validate()?;
    let k = kappa_triangle(p.0);
    if k.abs() > SELF_DUAL_TOL {
        return Err(Error::NotSelfDual(k));
    }
    Ok(())
}

/// Triangle → star, using the uniform `u` only for a closed triangle.
pub fn kernel_t(tri: Bits3, p: &ParamTriple, u: f64) -> Result<Bits3> {
    require_self_dual(p)?;
    Ok(apply_t(tri, &p.0, u))
}

/// Star → triangle, using the uniform `u` only for a fully open star.
pub fn kernel_s(star: Bits3, p: &ParamTriple, u: f64) -> Result<Bits3> {
    require_self_dual(p)?;
    Ok(apply_s(star, &p.0, u))
}
