//! Grammars shipped with the tool, addressable by short names.

pub const BUILTIN: [(&str, &str); 5] = [
    ("g0", include_str!("../grammars/g0.txt")),
    ("g1", include_str!("../grammars/g1.txt")),
    ("g2", include_str!("../grammars/g2.txt")),
    ("q1", include_str!("../grammars/q1.txt")),
    ("q2", include_str!("../grammars/q2.txt")),
];

pub fn builtin(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}
