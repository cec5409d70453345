//! Critical surfaces, self-dual parameters and per-edge intensities.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{EmbeddedGraph, Family, FamilyTag, GraphRole, Orientation};

/// Tolerance on `|κ|` for a floating-point triple to count as self-dual.
pub const SELF_DUAL_TOL: f64 = 1e-12;

/// Intensities `(p0, p1, p2)`, each in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamTriple(pub [f64; 3]);

impl ParamTriple {
    pub fn new(p0: f64, p1: f64, p2: f64) -> Result<Self> {
        let t = ParamTriple([p0, p1, p2]);
        t.validate()?;
        Ok(t)
    }

    pub fn homogeneous(p: f64) -> Result<Self> {
        ParamTriple::new(p, p, p)
    }

    pub fn validate(&self) -> Result<()> {
        const NAMES: [&str; 3] = ["p0", "p1", "p2"];
        for (i, &v) in self.0.iter().enumerate() {
            check_prob(NAMES[i], v)?;
        }
        Ok(())
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn complement(&self) -> [f64; 3] {
        [1.0 - self.0[0], 1.0 - self.0[1], 1.0 - self.0[2]]
    }
}

fn check_prob(name: &'static str, v: f64) -> Result<()> {
    if (0.0..1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name, value: v })
    }
}

pub fn kappa_triangle(p: [f64; 3]) -> f64 {
    p[0] + p[1] + p[2] - p[0] * p[1] * p[2] - 1.0
}

/// `κ` of the given family: `κ_□ = p0 + p1 − 1`, `κ_△`, or `κ_⬡(p) = −κ_△(1 − p)`.
/// Mixed lattices are parametrised by their triangular triple.
pub fn kappa(family: Family, params: &ParamTriple) -> f64 {
    let p = params.0;
    match family {
        Family::Square => p[0] + p[1] - 1.0,
        Family::Triangular | Family::Mixed(_) => kappa_triangle(p),
        Family::Hexagonal => -kappa_triangle(params.complement()),
    }
}

/// Critical probability of the homogeneous model.
pub fn critical_root(family: Family) -> Result<f64> {
    match family {
        Family::Square => Ok(0.5),
        Family::Triangular => Ok(triangular_root()),
        Family::Hexagonal => Ok(1.0 - triangular_root()),
        Family::Mixed(_) => Err(Error::UnsupportedFamily(
            "mixed lattices have no single critical probability".into(),
        )),
    }
}

/// Root of `3p − p³ − 1` in `(0, 1)` by bisection.
fn triangular_root() -> f64 {
    let f = |p: f64| 3.0 * p - p * p * p - 1.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-16 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The `p2` completing `(p0, p1)` to a self-dual triple.
pub fn solve_self_dual_third(p0: f64, p1: f64) -> Result<f64> {
    check_prob("p0", p0)?;
    check_prob("p1", p1)?;
    let p2 = (1.0 - p0 - p1) / (1.0 - p0 * p1);
    if !(0.0..1.0).contains(&p2) {
        return Err(Error::OutOfSurface(p2));
    }
    Ok(p2)
}

/// A lattice family with its parameters. Square models use `(p0, p1)` and
/// keep `p2 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct ModelSpec {
    pub family: Family,
    pub params: ParamTriple,
}

#[derive(Serialize, Deserialize)]
struct RawModel {
    family: FamilyTag,
    p: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
}

impl TryFrom<RawModel> for ModelSpec {
    type Error = Error;

    fn try_from(raw: RawModel) -> Result<Self> {
        let family = match raw.family {
            FamilyTag::Square => Family::Square,
            FamilyTag::Triangular => Family::Triangular,
            FamilyTag::Hexagonal => Family::Hexagonal,
            FamilyTag::Mixed => Family::Mixed(
                raw.m.ok_or_else(|| Error::ModelMismatch("mixed model needs m".into()))?,
            ),
        };
        if raw.m.is_some() && raw.family != FamilyTag::Mixed {
            return Err(Error::ModelMismatch("m is only meaningful for mixed models".into()));
        }
        ModelSpec::new(family, &raw.p)
    }
}

impl From<ModelSpec> for RawModel {
    fn from(m: ModelSpec) -> RawModel {
        let p = match m.family {
            Family::Square => m.params.0[..2].to_vec(),
            _ => m.params.0.to_vec(),
        };
        let mm = match m.family {
            Family::Mixed(k) => Some(k),
            _ => None,
        };
        RawModel {
            family: m.family.tag(),
            p,
            m: mm,
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let raw = RawModel::from(*self);
        let p: Vec<String> = raw.p.iter().map(|x| x.to_string()).collect();
        write!(f, "{}[{}]", self.family, p.join(","))
    }
}

impl ModelSpec {
    pub fn new(family: Family, p: &[f64]) -> Result<Self> {
        let expected = if family == Family::Square { 2 } else { 3 };
        if p.len() != expected {
            return Err(Error::ModelMismatch(format!(
                "{family} takes {expected} parameters, got {}",
                p.len()
            )));
        }
        let params = if expected == 2 {
            ParamTriple::new(p[0], p[1], 0.0)?
        } else {
            ParamTriple::new(p[0], p[1], p[2])?
        };
        Ok(ModelSpec { family, params })
    }

    pub fn square(p0: f64, p1: f64) -> Result<Self> {
        ModelSpec::new(Family::Square, &[p0, p1])
    }

    pub fn triangular(p: [f64; 3]) -> Result<Self> {
        ModelSpec::new(Family::Triangular, &p)
    }

    pub fn hexagonal(p: [f64; 3]) -> Result<Self> {
        ModelSpec::new(Family::Hexagonal, &p)
    }

    pub fn mixed(m: u32, p: [f64; 3]) -> Result<Self> {
        ModelSpec::new(Family::Mixed(m), &p)
    }

    pub fn kappa(&self) -> f64 {
        kappa(self.family, &self.params)
    }

    pub fn is_self_dual(&self) -> bool {
        self.kappa().abs() <= SELF_DUAL_TOL
    }

    pub fn require_self_dual(&self) -> Result<()> {
        if self.is_self_dual() {
            Ok(())
        } else {
            Err(Error::NotSelfDual(self.kappa()))
        }
    }

    /// The same triple on another mixed lattice.
    pub fn with_family(&self, family: Family) -> Self {
        ModelSpec { family, params: self.params }
    }
}

/// Open probability of every edge of `g` under `model`.
pub fn edge_probabilities(model: &ModelSpec, g: &EmbeddedGraph) -> Result<Vec<f64>> {
    if g.role() != GraphRole::Primal || g.family() != model.family {
        return Err(Error::ModelMismatch(format!(
            "model is {} but graph is {}",
            model.family,
            g.family()
        )));
    }
    let p = model.params.0;
    g.edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let class = edge.class;
            match (model.family, class.orientation) {
                (Family::Mixed(_), Orientation::Vertical) => Ok(1.0 - p[0]),
                _ => class
                    .index
                    .map(|i| p[i as usize])
                    .ok_or(Error::UnclassifiedEdge(e)),
            }
        })
        .collect()
}

// Exact arithmetic, used to verify the coupling identities without rounding.

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse a decimal literal such as `0.25` or `-1.5e-2` into an exact rational.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    if exp.abs() > 400 {
        return None;
    }
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int}{frac}");
    let num: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Some(r)
}

pub fn kappa_triangle_exact(p: &[BigRational; 3]) -> BigRational {
    &p[0] + &p[1] + &p[2] - &p[0] * &p[1] * &p[2] - BigRational::one()
}

pub fn solve_self_dual_third_exact(p0: &BigRational, p1: &BigRational) -> Result<BigRational> {
    let one = BigRational::one();
    let in_range = |v: &BigRational| !v.is_negative() && v < &one;
    if !in_range(p0) || !in_range(p1) {
        return Err(Error::ParameterOutOfRange {
            name: "p0/p1",
            value: 0.0,
        });
    }
    let p2 = (&one - p0 - p1) / (&one - p0 * p1);
    if !in_range(&p2) {
        return Err(Error::OutOfSurface(rat_to_f64(&p2)));
    }
    Ok(p2)
}

/// Whether `(1−p0)(1−p1)(1−p2) = σ2 − 2σ3` holds exactly.
pub fn sigma_identity_holds(p: &[BigRational; 3]) -> bool {
    let one = BigRational::one();
    let lhs = (&one - &p[0]) * (&one - &p[1]) * (&one - &p[2]);
    let s2 = &p[0] * &p[1] + &p[1] * &p[2] + &p[0] * &p[2];
    let s3 = &p[0] * &p[1] * &p[2];
    lhs == s2 - BigRational::from_integer(BigInt::from(2)) * s3
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
