//! Modal and intuitionistic formula trees: parsing, printing, polarity
//! analysis, modal depth, and the translation into the modal language.

use crate::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

/// Modal formula. Diamond is surface syntax only: `<>x` parses to
/// `Not(Box(Not(x)))` and the printer folds that shape back.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Bottom,
    Top,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Box_(Box<Formula>),
}

/// Intuitionistic formula. There is no negation node: `~x` parses to
/// `Implies(x, Bottom)` and prints back as `~x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntFormula {
    Var(String),
    Bottom,
    Top,
    And(Box<IntFormula>, Box<IntFormula>),
    Or(Box<IntFormula>, Box<IntFormula>),
    Implies(Box<IntFormula>, Box<IntFormula>),
}

/// A pair of finite variable sets bounding positive and negative occurrences.
/// Used both for polarity results and for removal sets; the sets may overlap.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PolaritySet {
    pub positive: BTreeSet<String>,
    pub negative: BTreeSet<String>,
}

impl PolaritySet {
    pub fn new<I, J, S, T>(pos: I, neg: J) -> Self
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        PolaritySet {
            positive: pos.into_iter().map(Into::into).collect(),
            negative: neg.into_iter().map(Into::into).collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The mirror pair (negative, positive).
    pub fn swapped(&self) -> Self {
        PolaritySet {
            positive: self.negative.clone(),
            negative: self.positive.clone(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.positive.is_empty() && self.negative.is_empty()
    }

    pub fn union(&self, other: &PolaritySet) -> Self {
        PolaritySet {
            positive: self.positive.union(&other.positive).cloned().collect(),
            negative: self.negative.union(&other.negative).cloned().collect(),
        }
    }
}

// Convenience constructors; deep trees read much better through these.
pub fn var(name: &str) -> Formula {
    Formula::Var(name.to_string())
}
pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}
pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}
pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}
pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}
pub fn bx(f: Formula) -> Formula {
    Formula::Box_(Box::new(f))
}
pub fn dia(f: Formula) -> Formula {
    not(bx(not(f)))
}

pub fn ivar(name: &str) -> IntFormula {
    IntFormula::Var(name.to_string())
}
pub fn iand(a: IntFormula, b: IntFormula) -> IntFormula {
    IntFormula::And(Box::new(a), Box::new(b))
}
pub fn ior(a: IntFormula, b: IntFormula) -> IntFormula {
    IntFormula::Or(Box::new(a), Box::new(b))
}
pub fn iimplies(a: IntFormula, b: IntFormula) -> IntFormula {
    IntFormula::Implies(Box::new(a), Box::new(b))
}
pub fn inot(a: IntFormula) -> IntFormula {
    iimplies(a, IntFormula::Bottom)
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    False,
    True,
    Tilde,
    BoxOp,
    DiaOp,
    Amp,
    Pipe,
    Arrow,
    Iff,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok<'a>)>,
    at: usize,
}

impl<'a> Lexer<'a> {
    fn lex(src: &'a str) -> Result<Lexer<'a>> {
        let bytes = src.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => i += 1,
                b'(' => {
                    toks.push((i, Tok::LParen));
                    i += 1;
                }
                b')' => {
                    toks.push((i, Tok::RParen));
                    i += 1;
                }
                b'~' => {
                    toks.push((i, Tok::Tilde));
                    i += 1;
                }
                b'&' => {
                    toks.push((i, Tok::Amp));
                    i += 1;
                }
                b'|' => {
                    toks.push((i, Tok::Pipe));
                    i += 1;
                }
                b'[' => {
                    if bytes.get(i + 1) == Some(&b']') {
                        toks.push((i, Tok::BoxOp));
                        i += 2;
                    } else {
                        return Err(Error::Parse {
                            pos: i,
                            msg: "expected \"[]\"".into(),
                        });
                    }
                }
                b'<' => {
                    if bytes.get(i + 1) == Some(&b'>') {
                        toks.push((i, Tok::DiaOp));
                        i += 2;
                    } else if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                        toks.push((i, Tok::Iff));
                        i += 3;
                    } else {
                        return Err(Error::Parse {
                            pos: i,
                            msg: "expected \"<>\" or \"<->\"".into(),
                        });
                    }
                }
                b'-' => {
                    if bytes.get(i + 1) == Some(&b'>') {
                        toks.push((i, Tok::Arrow));
                        i += 2;
                    } else {
                        return Err(Error::Parse {
                            pos: i,
                            msg: "expected \"->\"".into(),
                        });
                    }
                }
                b'a'..=b'z' => {
                    let start = i;
                    while i < bytes.len()
                        && (bytes[i].is_ascii_lowercase()
                            || bytes[i].is_ascii_digit()
                            || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    let word = &src[start..i];
                    toks.push((
                        start,
                        match word {
                            "false" => Tok::False,
                            "true" => Tok::True,
                            _ => Tok::Ident(word),
                        },
                    ));
                }
                _ => {
                    return Err(Error::Parse {
                        pos: i,
                        msg: format!("unexpected character {:?}", c as char),
                    });
                }
            }
        }
        Ok(Lexer { src, toks, at: 0 })
    }

    fn peek(&self) -> Option<Tok<'a>> {
        self.toks.get(self.at).map(|&(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks
            .get(self.at)
            .map(|&(p, _)| p)
            .unwrap_or(self.src.len())
    }

    fn bump(&mut self) {
        self.at += 1;
    }

    fn expect(&mut self, t: Tok<'a>, what: &str) -> Result<()> {
        if self.peek() == Some(t) {
            self.bump();
            Ok(())
        } else {
            Err(Error::Parse {
                pos: self.pos(),
                msg: format!("expected {}", what),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Parser. Precedence: unary > & > | > -> (right assoc) > <-> (left assoc).

struct Parser<'a> {
    lx: Lexer<'a>,
    modal: bool,
}

impl<'a> Parser<'a> {
    fn parse_iff(&mut self) -> Result<Formula> {
        let mut lhs = self.parse_imp()?;
        while self.lx.peek() == Some(Tok::Iff) {
            self.lx.bump();
            let rhs = self.parse_imp()?;
            lhs = and(implies(lhs.clone(), rhs.clone()), implies(rhs, lhs));
        }
        Ok(lhs)
    }

    fn parse_imp(&mut self) -> Result<Formula> {
        let lhs = self.parse_or()?;
        if self.lx.peek() == Some(Tok::Arrow) {
            self.lx.bump();
            let rhs = self.parse_imp()?;
            Ok(implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_or(&mut self) -> Result<Formula> {
        let mut lhs = self.parse_and()?;
        while self.lx.peek() == Some(Tok::Pipe) {
            self.lx.bump();
            lhs = or(lhs, self.parse_and()?);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Formula> {
        let mut lhs = self.parse_unary()?;
        while self.lx.peek() == Some(Tok::Amp) {
            self.lx.bump();
            lhs = and(lhs, self.parse_unary()?);
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Formula> {
        match self.lx.peek() {
            Some(Tok::Tilde) => {
                self.lx.bump();
                Ok(not(self.parse_unary()?))
            }
            Some(Tok::BoxOp) => {
                let p = self.lx.pos();
                self.lx.bump();
                if !self.modal {
                    return Err(Error::Parse {
                        pos: p,
                        msg: "modal operator in intuitionistic formula".into(),
                    });
                }
                Ok(bx(self.parse_unary()?))
            }
            Some(Tok::DiaOp) => {
                let p = self.lx.pos();
                self.lx.bump();
                if !self.modal {
                    return Err(Error::Parse {
                        pos: p,
                        msg: "modal operator in intuitionistic formula".into(),
                    });
                }
                Ok(dia(self.parse_unary()?))
            }
            Some(Tok::False) => {
                self.lx.bump();
                Ok(Formula::Bottom)
            }
            Some(Tok::True) => {
                self.lx.bump();
                Ok(Formula::Top)
            }
            Some(Tok::Ident(name)) => {
                self.lx.bump();
                Ok(Formula::Var(name.to_string()))
            }
            Some(Tok::LParen) => {
                self.lx.bump();
                let inner = self.parse_iff()?;
                self.lx.expect(Tok::RParen, "\")\"")?;
                Ok(inner)
            }
            _ => Err(Error::Parse {
                pos: self.lx.pos(),
                msg: "expected a formula".into(),
            }),
        }
    }
}

/// Parse a modal formula; `<>x` is expanded to `~[]~x`.
pub fn parse(text: &str) -> Result<Formula> {
    let lx = Lexer::lex(text)?;
    let mut p = Parser { lx, modal: true };
    let f = p.parse_iff()?;
    if p.lx.peek().is_some() {
        return Err(Error::Parse {
            pos: p.lx.pos(),
            msg: "trailing input".into(),
        });
    }
    Ok(f)
}

/// Parse an intuitionistic formula (the modal grammar minus `[]` and `<>`;
/// `~x` becomes `x -> false`).
pub fn parse_int(text: &str) -> Result<IntFormula> {
    let lx = Lexer::lex(text)?;
    let mut p = Parser { lx, modal: false };
    let f = p.parse_iff()?;
    if p.lx.peek().is_some() {
        return Err(Error::Parse {
            pos: p.lx.pos(),
            msg: "trailing input".into(),
        });
    }
    modal_to_int(&f).ok_or_else(|| Error::Parse {
        pos: 0,
        msg: "modal node in intuitionistic formula".into(),
    })
}

fn modal_to_int(f: &Formula) -> Option<IntFormula> {
    Some(match f {
        Formula::Var(s) => IntFormula::Var(s.clone()),
        Formula::Bottom => IntFormula::Bottom,
        Formula::Top => IntFormula::Top,
        // `~x` in the shared parser builds Not; in the intuitionistic
        // reading that is x -> false.
        Formula::Not(a) => iimplies(modal_to_int(a)?, IntFormula::Bottom),
        Formula::And(a, b) => iand(modal_to_int(a)?, modal_to_int(b)?),
        Formula::Or(a, b) => ior(modal_to_int(a)?, modal_to_int(b)?),
        Formula::Implies(a, b) => iimplies(modal_to_int(a)?, modal_to_int(b)?),
        Formula::Box_(_) => return None,
    })
}

// ---------------------------------------------------------------------------
// Printing. Levels: 1 implies, 2 or, 3 and, 4 unary/atom. A node prints
// parenthesized whenever its level is below the context's minimum.

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        _ => 4,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut String) {
    if level(f) < min {
        out.push('(');
        write_at(f, 0, out);
        out.push(')');
        return;
    }
    match f {
        Formula::Var(s) => out.push_str(s),
        Formula::Bottom => out.push_str("false"),
        Formula::Top => out.push_str("true"),
        Formula::Not(a) => {
            // Re-fold the diamond: ~[]~x prints as <>x.
            if let Formula::Box_(b) = a.as_ref() {
                if let Formula::Not(c) = b.as_ref() {
                    out.push_str("<>");
                    write_at(c, 4, out);
                    return;
                }
            }
            out.push('~');
            write_at(a, 4, out);
        }
        Formula::Box_(a) => {
            out.push_str("[]");
            write_at(a, 4, out);
        }
        Formula::And(a, b) => {
            write_at(a, 3, out);
            out.push_str(" & ");
            write_at(b, 4, out);
        }
        Formula::Or(a, b) => {
            write_at(a, 2, out);
            out.push_str(" | ");
            write_at(b, 3, out);
        }
        Formula::Implies(a, b) => {
            write_at(a, 2, out);
            out.push_str(" -> ");
            write_at(b, 1, out);
        }
    }
}

/// Print a modal formula; guaranteed to parse back to the identical tree.
pub fn render(f: &Formula) -> String {
    let mut s = String::new();
    write_at(f, 0, &mut s);
    s
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

fn int_level(f: &IntFormula) -> u8 {
    match f {
        // ~x sugar prints at unary level.
        IntFormula::Implies(_, b) if **b == IntFormula::Bottom => 4,
        IntFormula::Implies(..) => 1,
        IntFormula::Or(..) => 2,
        IntFormula::And(..) => 3,
        _ => 4,
    }
}

fn int_write_at(f: &IntFormula, min: u8, out: &mut String) {
    if int_level(f) < min {
        out.push('(');
        int_write_at(f, 0, out);
        out.push(')');
        return;
    }
    match f {
        IntFormula::Var(s) => out.push_str(s),
        IntFormula::Bottom => out.push_str("false"),
        IntFormula::Top => out.push_str("true"),
        IntFormula::Implies(a, b) if **b == IntFormula::Bottom => {
            out.push('~');
            int_write_at(a, 4, out);
        }
        IntFormula::And(a, b) => {
            int_write_at(a, 3, out);
            out.push_str(" & ");
            int_write_at(b, 4, out);
        }
        IntFormula::Or(a, b) => {
            int_write_at(a, 2, out);
            out.push_str(" | ");
            int_write_at(b, 3, out);
        }
        IntFormula::Implies(a, b) => {
            int_write_at(a, 2, out);
            out.push_str(" -> ");
            int_write_at(b, 1, out);
        }
    }
}

/// Print an intuitionistic formula; parses back to the identical tree.
pub fn render_int(f: &IntFormula) -> String {
    let mut s = String::new();
    int_write_at(f, 0, &mut s);
    s
}

impl fmt::Display for IntFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_int(self))
    }
}

// ---------------------------------------------------------------------------
// Polarity and depth

fn polarity_walk(f: &Formula, sign: bool, ps: &mut PolaritySet) {
    match f {
        Formula::Var(s) => {
            if sign {
                ps.positive.insert(s.clone());
            } else {
                ps.negative.insert(s.clone());
            }
        }
        Formula::Bottom | Formula::Top => {}
        Formula::Not(a) => polarity_walk(a, !sign, ps),
        Formula::And(a, b) | Formula::Or(a, b) => {
            polarity_walk(a, sign, ps);
            polarity_walk(b, sign, ps);
        }
        Formula::Implies(a, b) => {
            polarity_walk(a, !sign, ps);
            polarity_walk(b, sign, ps);
        }
        Formula::Box_(a) => polarity_walk(a, sign, ps),
    }
}

/// The sets of variables with positive and negative occurrences.
pub fn polarities(f: &Formula) -> PolaritySet {
    let mut ps = PolaritySet::default();
    polarity_walk(f, true, &mut ps);
    ps
}

/// Polarity sets of an intuitionistic formula (same recursion; implication
/// flips the antecedent).
pub fn int_polarities(f: &IntFormula) -> PolaritySet {
    fn walk(f: &IntFormula, sign: bool, ps: &mut PolaritySet) {
        match f {
            IntFormula::Var(s) => {
                if sign {
                    ps.positive.insert(s.clone());
                } else {
                    ps.negative.insert(s.clone());
                }
            }
            IntFormula::Bottom | IntFormula::Top => {}
            IntFormula::And(a, b) | IntFormula::Or(a, b) => {
                walk(a, sign, ps);
                walk(b, sign, ps);
            }
            IntFormula::Implies(a, b) => {
                walk(a, !sign, ps);
                walk(b, sign, ps);
            }
        }
    }
    let mut ps = PolaritySet::default();
    walk(f, true, &mut ps);
    ps
}

/// Maximum nesting of `[]`.
pub fn depth(f: &Formula) -> u32 {
    match f {
        Formula::Var(_) | Formula::Bottom | Formula::Top => 0,
        Formula::Not(a) => depth(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            depth(a).max(depth(b))
        }
        Formula::Box_(a) => depth(a) + 1,
    }
}

/// All variables occurring in the formula (either polarity).
pub fn variables(f: &Formula) -> BTreeSet<String> {
    let ps = polarities(f);
    ps.positive.union(&ps.negative).cloned().collect()
}

pub fn int_variables(f: &IntFormula) -> BTreeSet<String> {
    let ps = int_polarities(f);
    ps.positive.union(&ps.negative).cloned().collect()
}

/// True iff every positive variable of `f` lies in `ps.positive` and every
/// negative one in `ps.negative`.
pub fn is_polarity_formula(f: &Formula, ps: &PolaritySet) -> bool {
    let v = polarities(f);
    v.positive.is_subset(&ps.positive) && v.negative.is_subset(&ps.negative)
}

// ---------------------------------------------------------------------------
// Translation into the modal language

/// The standard translation: variables and implications get boxed, the rest
/// is homomorphic.
pub fn godel_translate(f: &IntFormula) -> Formula {
    match f {
        IntFormula::Var(s) => bx(Formula::Var(s.clone())),
        IntFormula::Bottom => Formula::Bottom,
        IntFormula::Top => Formula::Top,
        IntFormula::And(a, b) => and(godel_translate(a), godel_translate(b)),
        IntFormula::Or(a, b) => or(godel_translate(a), godel_translate(b)),
        IntFormula::Implies(a, b) => bx(implies(godel_translate(a), godel_translate(b))),
    }
}

/// Replace every variable `p` by `[]p`.
pub fn subst_box(f: &Formula) -> Formula {
    match f {
        Formula::Var(s) => bx(Formula::Var(s.clone())),
        Formula::Bottom => Formula::Bottom,
        Formula::Top => Formula::Top,
        Formula::Not(a) => not(subst_box(a)),
        Formula::And(a, b) => and(subst_box(a), subst_box(b)),
        Formula::Or(a, b) => or(subst_box(a), subst_box(b)),
        Formula::Implies(a, b) => implies(subst_box(a), subst_box(b)),
        Formula::Box_(a) => bx(subst_box(a)),
    }
}

/// Key for picking the nicest representative of an equivalence class:
/// shortest rendering first, ties broken lexicographically.
pub fn display_key(f: &Formula) -> (usize, String) {
    let s = render(f);
    (s.len(), s)
}
