//! Built-in inequality families.

use crate::family::InequalityFamily;
use crate::label::label;
use crate::poly::IntPoly;

fn lin(a: i64, b: i64) -> IntPoly {
    IntPoly::linear(a, b)
}

fn quad(a: i64, b: i64, c: i64) -> IntPoly {
    IntPoly::new(&[(2, a), (1, b), (0, c)]).expect("degree 2")
}

fn fam(name: &str, terms: &[(&str, IntPoly)], constant: IntPoly) -> InequalityFamily {
    InequalityFamily::new(
        name,
        terms.iter().map(|(l, p)| (label(l), p.clone())).collect(),
        constant,
    )
}

/// `I2`: the second-order inequality with half-integer coefficients.
pub fn i2() -> InequalityFamily {
    fam(
        "I2",
        &[
            ("0", lin(0, -4)),
            ("00", lin(0, 1)),
            ("01", lin(0, -2)),
            ("11", lin(0, 1)),
        ],
        lin(4, 0),
    )
    .with_denominator(2)
}

/// `I3`: the third-order inequality of the main text.
pub fn i3() -> InequalityFamily {
    fam(
        "I3",
        &[
            ("0", lin(-12, 12)),
            ("1", lin(-12, 12)),
            ("00", lin(3, -6)),
            ("01", lin(6, 0)),
            ("11", lin(3, -6)),
            ("000", lin(0, -2)),
            ("001", lin(0, -3)),
            ("111", lin(0, 1)),
        ],
        quad(12, -12, 0),
    )
}

/// `I4`: second- and fourth-order correlators only.
pub fn i4() -> InequalityFamily {
    fam(
        "I4",
        &[
            ("00", lin(24, -24)),
            ("01", lin(48, -48)),
            ("11", lin(24, -72)),
            ("0000", lin(0, 1)),
            ("0001", lin(0, 4)),
            ("0011", lin(0, 6)),
            ("0111", lin(0, 4)),
            ("1111", lin(0, 1)),
        ],
        quad(48, -48, 0),
    )
}

#[rustfmt::skip]
fn third_order_families() -> Vec<InequalityFamily> {
    vec![
        fam("I3_1", &[("0", lin(-24, 24)), ("00", lin(3, 6)), ("01", lin(-6, 12)), ("11", lin(3, -6)),
            ("000", lin(0, -2)), ("001", lin(0, 3)), ("111", lin(0, -1))], quad(12, -12, 0)),
        fam("I3_2", &[("0", lin(-12, 4)), ("1", lin(-4, 4)), ("00", lin(1, 6)), ("01", lin(2, 0)), ("11", lin(1, -2)),
            ("000", lin(0, -1)), ("001", lin(0, -2)), ("011", lin(0, -1))], quad(4, 4, 0)),
        fam("I3_3", &[("0", lin(-8, 0)), ("1", lin(-8, 8)), ("00", lin(1, 2)), ("01", lin(2, 4)), ("11", lin(1, -2)),
            ("000", lin(0, -1)), ("001", lin(0, -2)), ("011", lin(0, -1))], quad(4, 4, 0)),
        fam("I3_4", &[("0", lin(-8, 8)), ("1", lin(0, -8)), ("00", lin(1, -2)), ("01", lin(-2, 12)), ("11", lin(1, -6)),
            ("001", lin(0, -1)), ("011", lin(0, 2)), ("111", lin(0, -1))], quad(4, 4, 0)),
        fam("I3_5", &[("0", lin(-8, 8)), ("00", lin(1, 2)), ("01", lin(-2, 4)), ("11", lin(1, -2)),
            ("000", lin(0, -1)), ("001", lin(0, 2)), ("011", lin(0, -1))], quad(4, -4, 0)),
        fam("I3_6", &[("0", lin(-4, 4)), ("1", lin(-4, 4)), ("00", lin(1, -2)), ("01", lin(-2, 8)), ("11", lin(1, -2)),
            ("000", lin(0, -1)), ("001", lin(0, 2)), ("011", lin(0, -1))], quad(4, -4, 0)),
        fam("I3_7", &[("0", lin(-4, 4)), ("1", lin(-4, 4)), ("00", lin(1, -2)), ("01", lin(2, 0)), ("11", lin(1, -2)),
            ("000", lin(0, -1)), ("001", lin(0, -2)), ("011", lin(0, -1))], quad(4, -4, 0)),
        fam("I3_8", &[("00", lin(1, -6)), ("01", lin(-2, 4)), ("11", lin(1, -2)),
            ("000", lin(0, -1)), ("001", lin(0, 2)), ("011", lin(0, -1))], quad(4, -4, 0)),
        fam("I3_9", &[("00", lin(3, -12)), ("01", lin(-6, 0)), ("11", lin(3, 0)),
            ("000", lin(0, -2)), ("001", lin(0, 3)), ("111", lin(0, -1))], quad(12, -12, 0)),
        fam("I3_10", &[("0", lin(-12, 12)), ("1", lin(-4, 28)), ("00", lin(1, -2)), ("01", lin(2, -16)), ("11", lin(1, -10)),
            ("001", lin(0, 1)), ("011", lin(0, 2)), ("111", lin(0, 1))], quad(4, 20, 0)),
        fam("I3_11", &[("0", lin(-12, 12)), ("1", lin(12, 12)), ("00", lin(1, -2)), ("01", lin(-2, -8)), ("11", lin(1, 6)),
            ("001", lin(0, 1)), ("011", lin(0, -2)), ("111", lin(0, 1))], quad(4, 20, 0)),
        fam("I3_12", &[("0", lin(8, -8)), ("1", lin(16, 8)), ("00", lin(1, -2)), ("01", lin(2, 4)), ("11", lin(1, 10)),
            ("001", lin(0, 1)), ("011", lin(0, 2)), ("111", lin(0, 1))], quad(4, 20, 0)),
        fam("I3_13", &[("0", lin(-16, 16)), ("1", lin(-8, 56)), ("00", lin(1, -2)), ("01", lin(2, -20)), ("11", lin(1, -14)),
            ("001", lin(0, 1)), ("011", lin(0, 2)), ("111", lin(0, 1))], quad(4, 44, 0)),
        fam("I3_14", &[("0", lin(-16, 16)), ("1", lin(16, 32)), ("00", lin(1, -2)), ("01", lin(-2, -12)), ("11", lin(1, 10)),
            ("001", lin(0, 1)), ("011", lin(0, -2)), ("111", lin(0, 1))], quad(4, 44, 0)),
        fam("I3_15", &[("0", lin(12, -12)), ("1", lin(20, 28)), ("00", lin(1, -2)), ("01", lin(2, 8)), ("11", lin(1, 14)),
            ("001", lin(0, 1)), ("011", lin(0, 2)), ("111", lin(0, 1))], quad(4, 44, 0)),
        fam("I3_16", &[("0", lin(20, -44)), ("00", lin(2, 2)), ("01", lin(-4, 16)), ("11", lin(2, -8)),
            ("000", lin(0, 1)), ("001", lin(0, -1)), ("011", lin(0, -1)), ("111", lin(0, 1))], quad(10, -34, 48)),
        fam("I3_17", &[("0", lin(24, -72)), ("1", lin(24, -72)), ("00", lin(5, -10)), ("01", lin(-10, 44)), ("11", lin(5, -10)),
            ("000", lin(0, 2)), ("001", lin(0, -1)), ("011", lin(0, -4)), ("111", lin(0, 3))], quad(24, -120, 192)),
    ]
}

/// The twenty built-in families: `I2`, `I3`, `I3_1` … `I3_17`, `I4`.
pub fn builtin_catalog() -> Vec<InequalityFamily> {
    let mut out = vec![i2(), i3()];
    out.extend(third_order_families());
    out.push(i4());
    out
}

/// Smallest party number the families are used at.
pub fn n_min(_f: &InequalityFamily) -> u32 {
    2
}

/// Looks a built-in family up by name (`"I3_7"`, `"I3^(7)"` and `"i3_7"` all work).
pub fn find_family(name: &str) -> Option<InequalityFamily> {
    let key: String = name
        .chars()
        .filter(|c| !matches!(c, '^' | '(' | ')' | '_'))
        .collect::<String>()
        .to_uppercase();
    builtin_catalog()
        .into_iter()
        .find(|f| f.name.replace('_', "").to_uppercase() == key)
}

/// Like [`find_family`] but panics on unknown names; for tests and examples.
pub fn family(name: &str) -> InequalityFamily {
    find_family(name).unwrap_or_else(|| panic!("unknown family {name}"))
}
