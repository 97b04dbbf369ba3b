//! Axiom checks and the base classification
//! (weak BCC / BCC / BCK / BCI / proper).

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::laws::forall;
use crate::model::{Algebra, Relation, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    /// `(xy * zy) * xz = 0`
    #[serde(rename = "i")]
    I,
    /// `xx = 0`
    #[serde(rename = "ii")]
    II,
    /// `x0 = x`
    #[serde(rename = "iii")]
    III,
    /// `xy = yx = 0 => x = y`
    #[serde(rename = "iv")]
    IV,
    /// `0x = 0`
    #[serde(rename = "v")]
    V,
    /// `(x * xy) y = 0`
    #[serde(rename = "vi")]
    VI,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::I,
        Axiom::II,
        Axiom::III,
        Axiom::IV,
        Axiom::V,
        Axiom::VI,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Axiom::I => "i",
            Axiom::II => "ii",
            Axiom::III => "iii",
            Axiom::IV => "iv",
            Axiom::V => "v",
            Axiom::VI => "vi",
        }
    }

    pub fn check(self, a: &Algebra) -> Verdict {
        let law = self.id();
        match self {
            Axiom::I => forall(a, law, ["x", "y", "z"], Relation::Eq, |[x, y, z]| {
                Some((a.mul(a.mul(a.mul(x, y), a.mul(z, y)), a.mul(x, z)), 0))
            }),
            Axiom::II => forall(a, law, ["x"], Relation::Eq, |[x]| Some((a.mul(x, x), 0))),
            Axiom::III => forall(a, law, ["x"], Relation::Eq, |[x]| Some((a.mul(x, 0), x))),
            Axiom::IV => forall(a, law, ["x", "y"], Relation::Eq, |[x, y]| {
                (a.mul(x, y) == 0 && a.mul(y, x) == 0).then_some((x, y))
            }),
            Axiom::V => forall(a, law, ["x"], Relation::Eq, |[x]| Some((a.mul(0, x), 0))),
            Axiom::VI => forall(a, law, ["x", "y"], Relation::Eq, |[x, y]| {
                Some((a.mul(a.mul(x, a.mul(x, y)), y), 0))
            }),
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Per-axiom results of [`check_axioms`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub results: BTreeMap<Axiom, Verdict>,
}

impl AxiomReport {
    pub fn holds(&self, ax: Axiom) -> bool {
        self.results[&ax].holds()
    }

    /// Axioms (i)-(iv).
    pub fn is_weak_bcc(&self) -> bool {
        [Axiom::I, Axiom::II, Axiom::III, Axiom::IV]
            .iter()
            .all(|&ax| self.holds(ax))
    }

    /// First failing axiom among (i)-(iv).
    pub fn first_weak_bcc_failure(&self) -> Option<(Axiom, &Verdict)> {
        [Axiom::I, Axiom::II, Axiom::III, Axiom::IV]
            .into_iter()
            .map(|ax| (ax, &self.results[&ax]))
            .find(|(_, v)| !v.holds())
    }
}

pub fn check_axioms(a: &Algebra) -> AxiomReport {
    AxiomReport {
        results: Axiom::ALL.iter().map(|&ax| (ax, ax.check(a))).collect(),
    }
}

/// Weak BCC check on its own; cheaper than a full report when only the flag
/// is needed.
pub fn is_weak_bcc(a: &Algebra) -> bool {
    [Axiom::II, Axiom::III, Axiom::IV, Axiom::I]
        .iter()
        .all(|ax| ax.check(a).holds())
}

/// `xy * z = xz * y` over all triples.
pub fn exchange_identity(a: &Algebra) -> Verdict {
    forall(
        a,
        "xy*z = xz*y",
        ["x", "y", "z"],
        Relation::Eq,
        |[x, y, z]| Some((a.mul(a.mul(x, y), z), a.mul(a.mul(x, z), y))),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub is_weak_bcc: bool,
    pub is_bcc: bool,
    pub is_bck: bool,
    pub is_bci: bool,
    pub is_proper: bool,
    /// Failing law id -> counterexample. Keys are axiom ids `i`..`vi` and
    /// `bci` for the exchange identity.
    pub failures: BTreeMap<String, crate::model::Witness>,
}

/// The two independent BCI routes: the exchange identity on a weak BCC
/// algebra, and axioms (i)-(iv) together with (vi).
pub fn bci_routes(a: &Algebra, axioms: &AxiomReport) -> (bool, bool) {
    let weak = axioms.is_weak_bcc();
    let via_identity = weak && exchange_identity(a).holds();
    let via_axioms = weak && axioms.holds(Axiom::VI);
    (via_identity, via_axioms)
}

pub fn classify(a: &Algebra) -> ClassReport {
    let axioms = check_axioms(a);
    classify_with(a, &axioms)
}

pub fn classify_with(a: &Algebra, axioms: &AxiomReport) -> ClassReport {
    let mut failures: BTreeMap<String, _> = axioms
        .results
        .iter()
        .filter_map(|(ax, v)| v.witness().map(|w| (ax.id().to_string(), w.clone())))
        .collect();

    let is_weak_bcc = axioms.is_weak_bcc();
    let is_bcc = is_weak_bcc && axioms.holds(Axiom::V);
    let is_bck = is_bcc && axioms.holds(Axiom::VI);

    let exchange = exchange_identity(a);
    if let Some(w) = exchange.witness() {
        failures.insert("bci".to_string(), w.clone());
    }
    let is_bci = is_weak_bcc && exchange.holds();
    debug_assert_eq!(
        is_bci,
        is_weak_bcc && axioms.holds(Axiom::VI),
        "BCI routes disagree"
    );

    ClassReport {
        is_weak_bcc,
        is_bcc,
        is_bck,
        is_bci,
        is_proper: is_weak_bcc && !is_bcc && !is_bci,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::Algebra;

    #[test]
    fn trivial_algebra_satisfies_everything() {
        let r = check_axioms(&fixtures::triv1());
        assert!(r.results.values().all(Verdict::holds));
        let c = classify(&fixtures::triv1());
        assert!(c.is_weak_bcc && c.is_bcc && c.is_bck && c.is_bci && !c.is_proper);
        assert!(c.failures.is_empty());
    }

    #[test]
    fn ex28_fails_only_v_among_the_weak_bcc_axioms() {
        let r = check_axioms(&fixtures::ex28());
        assert!(r.is_weak_bcc());
        let w = r.results[&Axiom::V].witness().unwrap();
        assert_eq!(w.value("x"), Some(2));
        assert_eq!((w.lhs, w.rhs), (4, 0));
    }

    #[test]
    fn group_like_two_element_algebra() {
        let a = fixtures::z2gl();
        let r = check_axioms(&a);
        for ax in [Axiom::I, Axiom::II, Axiom::III, Axiom::IV, Axiom::VI] {
            assert!(r.holds(ax), "{ax}");
        }
        assert_eq!(r.results[&Axiom::V].witness().unwrap().value("x"), Some(1));
        let c = classify(&a);
        assert!(c.is_weak_bcc && !c.is_bcc && c.is_bci && !c.is_proper);
    }

    #[test]
    fn ex28_is_proper() {
        let a = fixtures::ex28();
        let c = classify(&a);
        assert!(c.is_weak_bcc && !c.is_bcc && !c.is_bci && c.is_proper);
        let w = &c.failures["bci"];
        assert!(w.is_violation(&a));
    }

    #[test]
    fn ex611_is_proper() {
        let c = classify(&fixtures::ex611());
        assert!(c.is_weak_bcc && c.is_proper);
    }

    #[test]
    fn non_weak_bcc_tables_report_witnesses() {
        // 0*1 = 1 and 1*0 = 0: (iii) fails at x = 1.
        let a = Algebra::from_rows(&[vec![0, 1], vec![0, 0]]).unwrap();
        let c = classify(&a);
        assert!(!c.is_weak_bcc && !c.is_proper && !c.is_bci);
        assert_eq!(c.failures["iii"].value("x"), Some(1));
        // xx != 0.
        let b = Algebra::from_rows(&[vec![0, 0], vec![1, 1]]).unwrap();
        assert_eq!(classify(&b).failures["ii"].value("x"), Some(1));
        // Antisymmetry.
        let c2 = Algebra::from_rows(&[vec![0, 0], vec![0, 0]]).unwrap();
        let w = &classify(&c2).failures["iv"];
        assert_eq!(w.values(), vec![0, 1]);
    }
}
