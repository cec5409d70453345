//! JSON event specifications: `{"type":"axis","k":2,"n":16}` or
//! `{"type":"annulus","sigma":"1010","N":2,"n":16}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Radius;

use super::{Annulus, AxisEventSpec, ColourSequence};

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum EventSpec {
    Axis {
        k: u32,
        n: u32,
        /// Skip the `n/√3 > k + 2` bound.
        #[serde(default, skip_serializing_if = "is_false")]
        unchecked: bool,
    },
    Annulus {
        sigma: ColourSequence,
        #[serde(rename = "N")]
        inner: u32,
        n: u32,
    },
}

impl EventSpec {
    pub fn axis(k: u32, n: u32) -> Result<Self> {
        let e = EventSpec::Axis { k, n, unchecked: false };
        e.validate()?;
        Ok(e)
    }

    pub fn annulus(sigma: ColourSequence, inner: u32, n: u32) -> Result<Self> {
        let e = EventSpec::Annulus { sigma, inner, n };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            EventSpec::Axis { .. } => self.axis_spec().map(|_| ()),
            EventSpec::Annulus { .. } => self.annulus_spec().map(|_| ()),
        }
    }

    /// The outer radius `n`.
    pub fn radius(&self) -> u32 {
        match *self {
            EventSpec::Axis { n, .. } | EventSpec::Annulus { n, .. } => n,
        }
    }

    /// The same event at another outer radius.
    pub fn with_radius(&self, n: u32) -> Self {
        let mut e = self.clone();
        match &mut e {
            EventSpec::Axis { n: m, .. } | EventSpec::Annulus { n: m, .. } => *m = n,
        }
        e
    }

    pub fn axis_spec(&self) -> Result<AxisEventSpec> {
        match *self {
            EventSpec::Axis { k, n, unchecked } => {
                let r = Radius::int(n as i64);
                if unchecked {
                    AxisEventSpec::unchecked(k, r)
                } else {
                    AxisEventSpec::new(k, r)
                }
            }
            _ => Err(Error::InvalidEvent("not an axis event".into())),
        }
    }

    pub fn annulus_spec(&self) -> Result<(ColourSequence, Annulus)> {
        match self {
            EventSpec::Annulus { sigma, inner, n } => {
                sigma.primal_arms()?;
                Ok((sigma.clone(), Annulus::new(*inner, *n)?))
            }
            _ => Err(Error::InvalidEvent("not an annulus event".into())),
        }
    }

    pub fn parse(json: &str) -> Result<Self> {
        let e: EventSpec = serde_json::from_str(json).map_err(|err| Error::Parse {
            line: err.line(),
            msg: err.to_string(),
        })?;
        e.validate()?;
        Ok(e)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("event specs always serialise")
    }

    /// Short label such as `A_2(16)` or `A_1010(2,16)`.
    pub fn label(&self) -> String {
        match self {
            EventSpec::Axis { k, n, .. } => format!("A_{k}({n})"),
            EventSpec::Annulus { sigma, inner, n } => format!("A_{sigma}({inner},{n})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let a = EventSpec::axis(2, 16).unwrap();
        assert_eq!(a.to_json(), r#"{"type":"axis","k":2,"n":16}"#);
        assert_eq!(EventSpec::parse(&a.to_json()).unwrap(), a);
        let b = EventSpec::annulus(ColourSequence::parse("1010").unwrap(), 2, 16).unwrap();
        assert_eq!(b.to_json(), r#"{"type":"annulus","sigma":"1010","N":2,"n":16}"#);
        assert_eq!(EventSpec::parse(&b.to_json()).unwrap(), b);
        assert_eq!(b.label(), "A_1010(2,16)");
        assert_eq!(b.with_radius(32).radius(), 32);
    }

    #[test]
    fn rejects_invalid() {
        assert!(EventSpec::parse(r#"{"type":"axis","k":3,"n":30}"#).is_err());
        assert!(EventSpec::parse(r#"{"type":"axis","k":2,"n":4}"#).is_err());
        assert!(EventSpec::parse(r#"{"type":"axis","k":2,"n":4,"unchecked":true}"#).is_ok());
        assert!(EventSpec::parse(r#"{"type":"annulus","sigma":"11","N":2,"n":8}"#).is_err());
        assert!(EventSpec::parse(r#"{"type":"annulus","sigma":"10","N":8,"n":8}"#).is_err());
        assert!(EventSpec::parse(r#"{"type":"box"}"#).is_err());
        assert!(matches!(EventSpec::parse("{"), Err(Error::Parse { .. })));
    }
}
