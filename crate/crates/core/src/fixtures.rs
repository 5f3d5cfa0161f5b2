//! Named sample inputs: two knot-producing elements, the spine elements for
//! `q = 2, 3`, and the figure-eight knot as a PD code.

use crate::error::{Error, Result};
use crate::group::TreeDiagram;
use crate::links::LinkDiagram;

/// A 3-colorable element whose link has determinant 3.
pub const EX3: &str = "((.((..).)).)|((..)(.(..)))";
/// A 7-colorable element whose link has determinant 7.
pub const EX7: &str = "((.(((..)((..)(..))).)).)|((..)(.(.(((..)(..)).))))";
pub const SPINE_Q2: &str = "(((.(..)).).)|(.(.((..).)))";
pub const SPINE_Q3: &str = "((((.(.(..))).).).)|(.(.(.(((..).).))))";
pub const FIG8_PD: &str = include_str!("../fixtures/fig8.pd");

pub const NAMES: [&str; 5] = ["ex3", "ex7", "spine-q2", "spine-q3", "fig8"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fixture {
    Element(TreeDiagram),
    Link(LinkDiagram),
}

/// Stored text of a fixture, as shipped.
pub fn text(name: &str) -> Option<&'static str> {
    Some(match name {
        "ex3" => EX3,
        "ex7" => EX7,
        "spine-q2" => SPINE_Q2,
        "spine-q3" => SPINE_Q3,
        "fig8" => FIG8_PD,
        _ => return None,
    })
}

pub fn load(name: &str) -> Result<Fixture> {
    let t = text(name).ok_or_else(|| Error::parse(0, format!("unknown fixture '{name}'")))?;
    if name == "fig8" {
        LinkDiagram::parse_pd(t).map(Fixture::Link)
    } else {
        TreeDiagram::parse(t, 2).map(Fixture::Element)
    }
}

pub fn element(name: &str) -> Result<TreeDiagram> {
    match load(name)? {
        Fixture::Element(d) => Ok(d),
        Fixture::Link(_) => Err(Error::parse(0, format!("fixture '{name}' is a link, not an element"))),
    }
}

pub fn fig8() -> LinkDiagram {
    LinkDiagram::parse_pd(FIG8_PD).expect("shipped fixture parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::links::spine_element;

    #[test]
    fn round_trips_are_exact() {
        for name in NAMES {
            let t = text(name).unwrap();
            match load(name).unwrap() {
                Fixture::Element(d) => assert_eq!(d.to_string(), t),
                Fixture::Link(l) => assert_eq!(l.pd_code(), t.trim_end()),
            }
        }
    }

    #[test]
    fn spines_match_construction() {
        assert_eq!(element("spine-q2").unwrap(), spine_element(2).unwrap());
        assert_eq!(element("spine-q3").unwrap(), spine_element(3).unwrap());
    }

    #[test]
    fn unknown_and_wrong_kind() {
        assert!(load("trefoil").is_err());
        assert!(element("fig8").is_err());
        assert!(text("ex3").is_some());
    }

    #[test]
    fn elements_are_reduced() {
        for name in ["ex3", "ex7", "spine-q2", "spine-q3"] {
            assert!(element(name).unwrap().is_reduced());
        }
    }
}
