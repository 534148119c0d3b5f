//! Displayed reference values the audit compares against.
//!
//! Three terms of the order-four block are read as the dimensionally
//! consistent term (every term carries four factors of `a` and its
//! derivatives): `a^{(4)} f^{(5)}` in D1 as `a^4 f^(5)`, `a^3 a'2 f^{(6)}` in
//! D4 as `a^3 a' f^(6)`, and `a^3 a' a^{(4)} f'''` in D4 as `a^3 a^(4) f'''`.

use vislaw_core::asymptotics::{QExpr, QMonomial};
use vislaw_core::{rat, CoeffExpr};

pub const LOW_ORDER_CAPITALS: [(&str, &str); 6] = [
    ("A", "1/2 a f''"),
    ("B1", "1/2 b1 f'' + 1/6 a^2 f'''"),
    ("B2", "1/4 a a' f''' + 1/8 a^2 f^(4) + 1/4 b1 f'''"),
    ("C1", "1/3 a^2 a' f''' + 1/2 c1 f'' + 1/24 a^3 f^(4)"),
    ("C2", "11/12 a (a')^2 f''' + 5/6 a^2 a' f^(4) + 7/24 a^2 a'' f''' + 3/4 c1 f''' + 1/12 a^3 f^(5)"),
    (
        "C3",
        "1/3 a a' a'' f''' + 11/24 a (a')^2 f^(4) + 1/6 c1 f^(4) + 1/48 a^3 f^(6) + 1/18 a^2 a''' f''' \
         + 1/6 a^2 a'' f^(4) + 1/4 a^2 a' f^(5)",
    ),
];

/// `(symbol, expression whose u-derivatives give it, number of derivatives)`.
pub const DERIVATIVE_CONSTRAINTS: [(&str, &str, u32); 3] =
    [("b1", "1/2 a^2", 1), ("c1", "1/6 a^3", 2), ("d1", "1/24 a^4", 3)];

pub const ORDER_FOUR_CAPITALS: [(&str, &str); 5] = [
    ("D1", "1/8 a^3 a' f^(4) + 1/6 a^3 a'' f''' + 1/120 a^4 f^(5) + 1/2 a^2 (a')^2 f''' + 1/2 d1 f''"),
    (
        "D2",
        "9/16 a^3 a'' f^(4) + 1/2 d2 a' f'' + 7/4 a^2 a' a'' f''' + d1 f''' + 1/6 a^3 a''' f''' + 1/48 a^4 f^(6) \
         + 3/8 a^3 a' f^(5) + 15/8 a^2 (a')^2 f^(4) + 3/2 a (a')^3 f'''",
    ),
    (
        "D3",
        "17/24 a^2 a' a'' f''' + 1/72 a^3 a''' f''' + 17/48 a^3 a'' f^(4) + 11/12 a (a')^3 f''' \
         + 5/4 a^2 (a')^2 f^(4) + 3/4 d1 f''' + 1/72 a^4 f^(6) + 1/4 a^3 a' f^(5)",
    ),
    (
        "D4",
        "7/16 a^3 a' f^(6) + 3/4 a^3 a'' f^(5) + 29/30 a^2 a' a''' f''' + 27/8 a (a')^3 f^(4) + 1/48 a^4 f^(7) \
         + 3/5 d2 f''' + 29/10 a (a')^2 a'' f''' + 4 a^2 a' a'' f^(4) + d1 f^(4) + 21/8 a^2 (a')^2 f^(5) \
         + 1/3 a^3 a''' f^(4) + 1/12 a^3 a^(4) f''' + 9/10 a^2 (a'')^2 f'''",
    ),
    (
        "D5",
        "23/576 a^3 a^(4) f^(4) + 1/144 a^3 a^(5) f''' + 19/48 a^2 (a'')^2 f^(4) + 1/8 d2 f^(4) \
         + 1/8 a^3 a'' f^(6) + 13/144 a^3 a''' f^(5) + 3/4 a (a')^3 f^(5) + 1/384 a^4 f^(8) \
         + 23/144 a^2 a'' a''' f''' + 7/16 a^2 (a')^2 f^(6) + 3/16 a a' (a'')^2 f''' + 1/16 a^3 a' f^(7) \
         + 1/8 d1 f^(5) + 73/144 a^2 a' a''' f^(4) + 13/144 a^2 a' a^(4) f''' + 47/48 a^2 a' a'' f^(5) \
         + 7/18 a (a')^2 a''' f''' + 4/3 a (a')^2 a'' f^(4)",
    ),
];

pub const D2_CONSTRAINT: &str = "5/24 a^3 a^(4) + 8/3 a (a')^2 a'' + a^2 (a'')^2 + 31/18 a^2 a' a'''";

pub fn coeff(text: &str) -> CoeffExpr {
    text.parse().expect("reference expressions parse")
}

/// `c u^up u_x^p1 u_xx^p2 ... (ln u_x)^log`.
fn mono(c: (i64, i64), up: u32, jets: &[i32], log: u32) -> QExpr {
    QExpr::term(QMonomial::new(jets.to_vec(), log), CoeffExpr::id().pow(up).scale(&rat(c.0, c.1)))
}

fn sum(terms: &[QExpr]) -> QExpr {
    terms.iter().fold(QExpr::zero(), |acc, t| &acc + t)
}

/// Burgers quasi-Miura terms `v^1, v^2, v^3` as displayed.
pub fn burgers_quasi_miura() -> [QExpr; 3] {
    [
        mono((1, 2), 0, &[-1, 1], 0),
        sum(&[mono((1, 8), 0, &[-2, 0, 1], 0), mono((-1, 6), 0, &[-3, 2], 0)]).dx(),
        sum(&[
            mono((1, 48), 0, &[-3, 0, 0, 0, 1], 0),
            mono((-1, 6), 0, &[-4, 1, 0, 1], 0),
            mono((-1, 8), 0, &[-4, 0, 2], 0),
            mono((3, 4), 0, &[-5, 2, 1], 0),
        ])
        .dx(),
    ]
}

/// Quasi-Miura terms `v^1, v^2` for `a(u) = u` as displayed.
pub fn linear_quasi_miura() -> [QExpr; 2] {
    let first = sum(&[mono((1, 2), 1, &[-1, 1], 0), mono((1, 2), 0, &[1], 1)]);
    let second = sum(&[
        mono((1, 2), 2, &[-2, 0, 0, 1], 0),
        mono((3, 1), 1, &[-1, 0, 1], 0),
        mono((-7, 3), 2, &[-3, 1, 1], 0),
        mono((-7, 3), 1, &[-2, 2], 0),
        mono((2, 1), 2, &[-4, 3], 0),
        mono((1, 2), 0, &[0, 1], 2),
        mono((2, 1), 0, &[0, 1], 1),
        mono((2, 1), 0, &[0, 1], 0),
        mono((1, 1), 1, &[-1, 0, 1], 1),
        mono((-1, 1), 1, &[-2, 2], 1),
    ])
    .scale(&rat(1, 4));
    [first, second]
}
