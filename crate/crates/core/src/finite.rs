//! Finite rings given by their operation tables, and exhaustive checks of
//! the general facts about (weakly) fadelian rings on them.
//!
//! Elements are indices `0..m`. Subsets are `u64` bitmasks, so rings have at
//! most [`MAX_SIZE`] elements.
//!
//! Finite integral rings are fields (Wedderburn), so no finite ring can be
//! weakly fadelian without being fadelian; the lab can test the general
//! implications but cannot produce a ring separating the two notions.

use std::fmt;

use thiserror::Error;

use crate::ore::Side;

pub const MAX_SIZE: usize = 64;

type Set = u64;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FiniteRingError {
    #[error("ring has {0} elements, at most {MAX_SIZE} are supported")]
    TooLarge(usize),
    #[error("ring axiom violated: {0}")]
    AxiomViolation(String),
    #[error("the ring has zero divisors")]
    NotADomain,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRing {
    name: String,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    zero: usize,
    one: usize,
}

fn violation(msg: impl Into<String>) -> FiniteRingError {
    FiniteRingError::AxiomViolation(msg.into())
}

impl FiniteRing {
    /// Checks every ring axiom exhaustively, and that `zero ≠ one`.
    pub fn new(
        name: impl Into<String>,
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
        zero: usize,
        one: usize,
    ) -> Result<Self, FiniteRingError> {
        let m = add.len();
        if m > MAX_SIZE {
            return Err(FiniteRingError::TooLarge(m));
        }
        if mul.len() != m || add.iter().chain(&mul).any(|row| row.len() != m) {
            return Err(violation("tables are not square of the same size"));
        }
        if add.iter().chain(&mul).flatten().any(|&v| v >= m) || zero >= m || one >= m {
            return Err(violation("index out of range"));
        }
        if zero == one {
            return Err(violation("zero equals one"));
        }
        let ring = FiniteRing { name: name.into(), add, mul, zero, one };
        ring.check_axioms()?;
        Ok(ring)
    }

    fn check_axioms(&self) -> Result<(), FiniteRingError> {
        let (add, mul) = (&self.add, &self.mul);
        for x in self.elements() {
            if add[x][self.zero] != x || add[self.zero][x] != x {
                return Err(violation(format!("{x} + 0 != {x}")));
            }
            if mul[x][self.one] != x || mul[self.one][x] != x {
                return Err(violation(format!("{x} * 1 != {x}")));
            }
            if !self.elements().any(|y| add[x][y] == self.zero) {
                return Err(violation(format!("{x} has no additive inverse")));
            }
            for y in self.elements() {
                if add[x][y] != add[y][x] {
                    return Err(violation(format!("{x} + {y} != {y} + {x}")));
                }
                for z in self.elements() {
                    if add[add[x][y]][z] != add[x][add[y][z]] {
                        return Err(violation(format!("addition not associative at ({x}, {y}, {z})")));
                    }
                    if mul[mul[x][y]][z] != mul[x][mul[y][z]] {
                        return Err(violation(format!("multiplication not associative at ({x}, {y}, {z})")));
                    }
                    if mul[x][add[y][z]] != add[mul[x][y]][mul[x][z]] {
                        return Err(violation(format!("left distributivity fails at ({x}, {y}, {z})")));
                    }
                    if mul[add[x][y]][z] != add[mul[x][z]][mul[y][z]] {
                        return Err(violation(format!("right distributivity fails at ({x}, {y}, {z})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.add.len()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x][y]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x][y]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    fn nonzero(&self) -> impl Iterator<Item = usize> + '_ {
        self.elements().filter(move |&x| x != self.zero)
    }

    /// `aR` for [`Side::Right`], `Ra` for [`Side::Left`].
    fn principal(&self, side: Side, a: usize) -> Set {
        self.elements().fold(0, |acc, r| {
            let v = match side {
                Side::Right => self.mul[a][r],
                Side::Left => self.mul[r][a],
            };
            acc | 1 << v
        })
    }

    fn sumset(&self, s: Set, t: Set) -> Set {
        let mut out = 0;
        for u in members(s) {
            for v in members(t) {
                out |= 1 << self.add[u][v];
            }
        }
        out
    }

    fn full(&self) -> Set {
        if self.size() == 64 {
            u64::MAX
        } else {
            (1 << self.size()) - 1
        }
    }

    /// `aR + Ra`.
    fn two_sided_sum(&self, a: usize) -> Set {
        self.sumset(self.principal(Side::Right, a), self.principal(Side::Left, a))
    }

    /// `1 ∈ aR + Ra` for every nonzero `a`.
    pub fn is_weakly_fadelian(&self) -> bool {
        self.nonzero().all(|a| self.two_sided_sum(a) & (1 << self.one) != 0)
    }

    /// `aR + Ra = R` for every nonzero `a`.
    pub fn is_fadelian(&self) -> bool {
        self.nonzero().all(|a| self.two_sided_sum(a) == self.full())
    }

    /// No zero divisors.
    pub fn is_integral(&self) -> bool {
        self.nonzero().all(|a| self.nonzero().all(|b| self.mul[a][b] != self.zero))
    }

    pub fn is_commutative(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    /// Every nonzero element has a two-sided inverse.
    pub fn is_division_ring(&self) -> bool {
        self.nonzero().all(|a| self.elements().any(|b| self.mul[a][b] == self.one && self.mul[b][a] == self.one))
    }

    pub fn is_field(&self) -> bool {
        self.is_commutative() && self.is_division_ring()
    }

    /// The two-sided ideal generated by `a`.
    pub fn ideal(&self, a: usize) -> Set {
        let mut gens: Set = 0;
        for r in self.elements() {
            for s in self.elements() {
                gens |= 1 << self.mul[self.mul[r][a]][s];
            }
        }
        // In a finite group, closure under addition gives the subgroup.
        let mut ideal = gens | 1 << self.zero;
        loop {
            let next = self.sumset(ideal, gens) | ideal;
            if next == ideal {
                return ideal;
            }
            ideal = next;
        }
    }

    /// Every nonzero element generates the whole ring as a two-sided ideal.
    pub fn is_simple(&self) -> bool {
        self.nonzero().all(|a| self.ideal(a) & (1 << self.one) != 0)
    }

    /// `aR ∩ xR ≠ 0` ([`Side::Right`]) or `Ra ∩ Rx ≠ 0` ([`Side::Left`]) for
    /// all nonzero `a, x`. Only defined for domains.
    pub fn is_ore(&self, side: Side) -> Result<bool, FiniteRingError> {
        if !self.is_integral() {
            return Err(FiniteRingError::NotADomain);
        }
        let nonzero_mask = self.full() & !(1 << self.zero);
        let ideals: Vec<Set> = self.elements().map(|a| self.principal(side, a)).collect();
        Ok(self.nonzero().all(|a| self.nonzero().all(|x| ideals[a] & ideals[x] & nonzero_mask != 0)))
    }

    /// `xy = yx = 0 ⇒ x² = 0 ∨ y² = 0` for all `x, y`.
    pub fn commuting_annihilators_square_to_zero(&self) -> bool {
        self.elements().all(|x| {
            self.elements().all(|y| {
                let annihilate = self.mul[x][y] == self.zero && self.mul[y][x] == self.zero;
                !annihilate || self.mul[x][x] == self.zero || self.mul[y][y] == self.zero
            })
        })
    }

    /// `x² = 0 ⇒ x = 0` for all `x`.
    pub fn no_square_zero(&self) -> bool {
        self.nonzero().all(|x| self.mul[x][x] != self.zero)
    }

    /// True if `map` is a bijection onto `other` preserving both operations
    /// and both identities.
    pub fn is_isomorphism(&self, other: &FiniteRing, map: &[usize]) -> bool {
        let m = self.size();
        if other.size() != m || map.len() != m {
            return false;
        }
        let image = map.iter().try_fold(0u64, |acc, &v| (v < m && acc & (1 << v) == 0).then_some(acc | 1 << v));
        if image.is_none() || map[self.zero] != other.zero || map[self.one] != other.one {
            return false;
        }
        self.elements().all(|x| {
            self.elements().all(|y| {
                map[self.add[x][y]] == other.add[map[x]][map[y]] && map[self.mul[x][y]] == other.mul[map[x]][map[y]]
            })
        })
    }

    /// Parses the table format written by [`FiniteRing::to_table`]: a
    /// `ring <m>` header, `m` rows of the addition table, `m` rows of the
    /// multiplication table, and a last line with the indices of zero and
    /// one. Lines starting with `#` are ignored.
    pub fn parse_table(name: impl Into<String>, text: &str) -> Result<Self, FiniteRingError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let err = |line: usize, message: &str| FiniteRingError::Parse { line, message: message.to_string() };
        let parse_row = |line: usize, l: &str| -> Result<Vec<usize>, FiniteRingError> {
            l.split_whitespace()
                .map(|tok| tok.parse::<usize>().map_err(|_| err(line, &format!("not an index: {tok:?}"))))
                .collect()
        };
        let (line, header) = lines.next().ok_or_else(|| err(1, "empty input"))?;
        let m = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["ring", m] => m.parse::<usize>().map_err(|_| err(line, "bad ring size"))?,
            _ => return Err(err(line, "expected `ring <m>`")),
        };
        if m > MAX_SIZE {
            return Err(FiniteRingError::TooLarge(m));
        }
        let mut table = |what: &str| -> Result<Vec<Vec<usize>>, FiniteRingError> {
            (0..m)
                .map(|_| {
                    let (line, l) = lines.next().ok_or_else(|| err(line, &format!("missing {what} row")))?;
                    let row = parse_row(line, l)?;
                    if row.len() != m {
                        return Err(err(line, &format!("{what} row needs {m} entries")));
                    }
                    Ok(row)
                })
                .collect()
        };
        let add = table("addition")?;
        let mul = table("multiplication")?;
        let (line, last) = lines.next().ok_or_else(|| err(line, "missing `zero one` line"))?;
        let ids = parse_row(line, last)?;
        let [zero, one] = ids[..] else {
            return Err(err(line, "expected `zero one`"));
        };
        if let Some((line, _)) = lines.next() {
            return Err(err(line, "trailing input"));
        }
        FiniteRing::new(name, add, mul, zero, one)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("ring {}\n", self.size());
        for row in self.add.iter().chain(&self.mul) {
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out.push_str(&format!("{} {}\n", self.zero, self.one));
        out
    }
}

fn members(s: Set) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| s & (1 << i) != 0)
}

/// `ℤ/n`, element `i` being the class of `i`.
pub fn make_zmod(n: usize) -> Result<FiniteRing, FiniteRingError> {
    let add = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
    let mul = (0..n).map(|x| (0..n).map(|y| (x * y) % n).collect()).collect();
    FiniteRing::new(format!("Z/{n}"), add, mul, 0, 1 % n)
}

/// 2×2 matrices over `𝔽₂`; bits 0..4 of an index are the entries
/// `(1,1), (1,2), (2,1), (2,2)`.
pub fn make_matrix_ring_2x2_f2() -> FiniteRing {
    let entries = |i: usize| [[i & 1, (i >> 1) & 1], [(i >> 2) & 1, (i >> 3) & 1]];
    let index = |m: [[usize; 2]; 2]| m[0][0] | m[0][1] << 1 | m[1][0] << 2 | m[1][1] << 3;
    let add = (0..16).map(|x| (0..16).map(|y| x ^ y).collect()).collect();
    let mul = (0..16)
        .map(|x| {
            (0..16)
                .map(|y| {
                    let (a, b) = (entries(x), entries(y));
                    let mut c = [[0; 2]; 2];
                    for (i, row) in c.iter_mut().enumerate() {
                        for (j, cell) in row.iter_mut().enumerate() {
                            *cell = (a[i][0] * b[0][j] + a[i][1] * b[1][j]) % 2;
                        }
                    }
                    index(c)
                })
                .collect()
        })
        .collect();
    FiniteRing::new("M2(F2)", add, mul, 0, index([[1, 0], [0, 1]])).expect("matrix ring tables are valid")
}

/// `R × S`, the pair `(i, j)` having index `i·|S| + j`.
pub fn make_product(r: &FiniteRing, s: &FiniteRing) -> Result<FiniteRing, FiniteRingError> {
    let (m, n) = (r.size(), s.size());
    if m * n > MAX_SIZE {
        return Err(FiniteRingError::TooLarge(m * n));
    }
    let table = |op: fn(&FiniteRing, usize, usize) -> usize| -> Vec<Vec<usize>> {
        (0..m * n).map(|x| (0..m * n).map(|y| op(r, x / n, y / n) * n + op(s, x % n, y % n)).collect()).collect()
    };
    FiniteRing::new(
        format!("{} x {}", r.name(), s.name()),
        table(FiniteRing::add),
        table(FiniteRing::mul),
        r.zero() * n + s.zero(),
        r.one() * n + s.one(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// Premise and conclusion hold.
    Pass,
    /// Premise fails.
    Vacuous,
    /// Premise holds, conclusion fails.
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Vacuous => "vacuous",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Implication {
    pub name: &'static str,
    pub status: Status,
}

/// Properties of one ring and the status of each implication checked on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplicationReport {
    pub ring: String,
    pub size: usize,
    pub weakly_fadelian: bool,
    pub fadelian: bool,
    pub integral: bool,
    pub simple: bool,
    pub commutative: bool,
    pub division_ring: bool,
    /// `None` when the ring is not a domain.
    pub right_ore: Option<bool>,
    pub left_ore: Option<bool>,
    pub implications: Vec<Implication>,
}

impl ImplicationReport {
    pub fn violations(&self) -> Vec<&'static str> {
        self.implications.iter().filter(|i| i.status == Status::Fail).map(|i| i.name).collect()
    }
}

fn implication(name: &'static str, premise: bool, conclusion: impl FnOnce() -> bool) -> Implication {
    let status = if !premise {
        Status::Vacuous
    } else if conclusion() {
        Status::Pass
    } else {
        Status::Fail
    };
    Implication { name, status }
}

/// Evaluates every implication on `r`.
pub fn check_implications(r: &FiniteRing) -> ImplicationReport {
    let wf = r.is_weakly_fadelian();
    let fad = r.is_fadelian();
    let integral = r.is_integral();
    let simple = r.is_simple();
    let commutative = r.is_commutative();
    let division_ring = r.is_division_ring();
    let right_ore = r.is_ore(Side::Right).ok();
    let left_ore = r.is_ore(Side::Left).ok();
    let implications = vec![
        implication("weakly fadelian => simple", wf, || simple),
        implication("weakly fadelian => integral", wf, || integral),
        implication("weakly fadelian => (xy = yx = 0 => x^2 = 0 or y^2 = 0)", wf, || {
            r.commuting_annihilators_square_to_zero()
        }),
        implication("weakly fadelian => (x^2 = 0 => x = 0)", wf, || r.no_square_zero()),
        implication("weakly fadelian and right Ore => fadelian", wf && right_ore == Some(true), || fad),
        implication("weakly fadelian and left Ore => fadelian", wf && left_ore == Some(true), || fad),
        implication("fadelian => weakly fadelian", fad, || wf),
        implication("division ring => fadelian", division_ring, || fad),
        implication("commutative => (weakly fadelian <=> field)", commutative, || wf == (division_ring && commutative)),
    ];
    ImplicationReport {
        ring: r.name().to_string(),
        size: r.size(),
        weakly_fadelian: wf,
        fadelian: fad,
        integral,
        simple,
        commutative,
        division_ring,
        right_ore,
        left_ore,
        implications,
    }
}
