//! The in-repo fixture corpus: the finite algebras worked in the source
//! examples, plus the trivial and two-element group-like algebras.

use crate::model::{parse_table, Algebra};

pub const EX28: &str = include_str!("../fixtures/EX28.bcc");
pub const EX31: &str = include_str!("../fixtures/EX31.bcc");
pub const EX56: &str = include_str!("../fixtures/EX56.bcc");
pub const E63: &str = include_str!("../fixtures/E63.bcc");
pub const EX611: &str = include_str!("../fixtures/EX611.bcc");
pub const E76: &str = include_str!("../fixtures/E76.bcc");
pub const E77: &str = include_str!("../fixtures/E77.bcc");
pub const TRIV1: &str = include_str!("../fixtures/TRIV1.bcc");
pub const Z2GL: &str = include_str!("../fixtures/Z2GL.bcc");

pub const ALL: [(&str, &str); 9] = [
    ("EX28", EX28),
    ("EX31", EX31),
    ("EX56", EX56),
    ("E63", E63),
    ("EX611", EX611),
    ("E76", E76),
    ("E77", E77),
    ("TRIV1", TRIV1),
    ("Z2GL", Z2GL),
];

fn load(text: &str) -> Algebra {
    parse_table(text).expect("fixture parses")
}

pub fn ex28() -> Algebra {
    load(EX28)
}
pub fn ex31() -> Algebra {
    load(EX31)
}
pub fn ex56() -> Algebra {
    load(EX56)
}
pub fn e63() -> Algebra {
    load(E63)
}
pub fn ex611() -> Algebra {
    load(EX611)
}
pub fn e76() -> Algebra {
    load(E76)
}
pub fn e77() -> Algebra {
    load(E77)
}
pub fn triv1() -> Algebra {
    load(TRIV1)
}
pub fn z2gl() -> Algebra {
    load(Z2GL)
}

/// The whole corpus, in a fixed order.
pub fn corpus() -> Vec<Algebra> {
    ALL.iter().map(|(_, text)| load(text)).collect()
}

/// Looks a fixture up by name.
pub fn by_name(name: &str) -> Option<Algebra> {
    ALL.iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, text)| load(text))
}
