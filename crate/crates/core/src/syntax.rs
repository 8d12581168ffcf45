//! Inner (BD) and outer formulas, the concrete grammar, printing and
//! structural transforms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// Suffix used for the fresh variables of `star_neg_removal`.
pub const RESERVED_SUFFIX: &str = "__n";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bd {
    Var(String),
    Neg(Box<Bd>),
    And(Box<Bd>, Box<Bd>),
    Or(Box<Bd>, Box<Bd>),
    /// `□`; index 0 is the unindexed box of the one-relation logics.
    Nec(u8, Box<Bd>),
    /// `◇`
    Pos(u8, Box<Bd>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Pr,
    Bl,
    Db,
    Cf,
    Uc,
    B,
    Pl,
    Pr1,
    Pr2,
}

impl Tag {
    pub const ALL: [Tag; 9] = [
        Tag::Pr,
        Tag::Bl,
        Tag::Db,
        Tag::Cf,
        Tag::Uc,
        Tag::B,
        Tag::Pl,
        Tag::Pr1,
        Tag::Pr2,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Tag::Pr => "Pr",
            Tag::Bl => "Bl",
            Tag::Db => "Db",
            Tag::Cf => "Cf",
            Tag::Uc => "Uc",
            Tag::B => "B",
            Tag::Pl => "Pl",
            Tag::Pr1 => "Pr1",
            Tag::Pr2 => "Pr2",
        }
    }

    fn from_keyword(s: &str) -> Option<Tag> {
        Tag::ALL.into_iter().find(|t| t.keyword() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModalAtom {
    pub tag: Tag,
    pub body: Bd,
}

/// Outer-layer formulas. `Tilde`/`Imp` are the Łukasiewicz connectives,
/// `NTilde`/`NImp`/`And` the NŁ ones; the parser picks per logic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fm {
    Var(String),
    Atom(ModalAtom),
    Neg(Box<Fm>),
    Tilde(Box<Fm>),
    Delta(Box<Fm>),
    Imp(Box<Fm>, Box<Fm>),
    NTilde(Box<Fm>),
    NImp(Box<Fm>, Box<Fm>),
    And(Box<Fm>, Box<Fm>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LogicId {
    LukDelta,
    Luk2Delta,
    NLuk,
    PrLuk2,
    FourPr,
    BelLuk2,
    BelNLuk,
    ProbS5,
    ProbNLukS5,
}

impl LogicId {
    pub const ALL: [LogicId; 9] = [
        LogicId::LukDelta,
        LogicId::Luk2Delta,
        LogicId::NLuk,
        LogicId::PrLuk2,
        LogicId::FourPr,
        LogicId::BelLuk2,
        LogicId::BelNLuk,
        LogicId::ProbS5,
        LogicId::ProbNLukS5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LogicId::LukDelta => "luk-delta",
            LogicId::Luk2Delta => "luk2",
            LogicId::NLuk => "nluk",
            LogicId::PrLuk2 => "pr-luk2",
            LogicId::FourPr => "4pr",
            LogicId::BelLuk2 => "bel-luk2",
            LogicId::BelNLuk => "bel-nluk",
            LogicId::ProbS5 => "prob-s5",
            LogicId::ProbNLukS5 => "prob-nluk-s5",
        }
    }

    /// NŁ-family outer connectives (`∼N`, `⤳`, primitive `∧`).
    pub fn nelson(self) -> bool {
        matches!(self, LogicId::NLuk | LogicId::BelNLuk | LogicId::ProbNLukS5)
    }

    pub fn propositional(self) -> bool {
        matches!(self, LogicId::LukDelta | LogicId::Luk2Delta | LogicId::NLuk)
    }

    /// Whether the outer BD negation `¬` is available.
    pub fn has_outer_neg(self) -> bool {
        !matches!(self, LogicId::LukDelta | LogicId::FourPr)
    }

    /// Designated value is the pair (1,0) rather than truth 1 alone.
    pub fn paired_designation(self) -> bool {
        matches!(
            self,
            LogicId::Luk2Delta | LogicId::PrLuk2 | LogicId::BelLuk2 | LogicId::ProbS5
        )
    }

    pub fn tags(self) -> &'static [Tag] {
        match self {
            LogicId::PrLuk2 | LogicId::ProbS5 => &[Tag::Pr],
            LogicId::FourPr => &[Tag::Bl, Tag::Db, Tag::Cf, Tag::Uc],
            LogicId::BelLuk2 => &[Tag::B],
            LogicId::BelNLuk => &[Tag::B, Tag::Pl],
            LogicId::ProbNLukS5 => &[Tag::Pr1, Tag::Pr2],
            _ => &[],
        }
    }
}

impl FromStr for LogicId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let k = s.to_ascii_lowercase().replace('_', "-");
        let alias = match k.as_str() {
            "lukdelta" | "luk" => "luk-delta",
            "luk2delta" | "luk2-delta" => "luk2",
            "prluk2" | "pr" => "pr-luk2",
            "fourpr" | "four-pr" => "4pr",
            "belluk2" => "bel-luk2",
            "belnluk" => "bel-nluk",
            "probs5" | "s5" => "prob-s5",
            "probnluks5" => "prob-nluk-s5",
            other => other,
        };
        LogicId::ALL
            .into_iter()
            .find(|l| l.name() == alias)
            .ok_or_else(|| format!("unknown logic `{s}`"))
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

// ---------------------------------------------------------------- builders

pub fn var(s: &str) -> Bd {
    Bd::Var(s.to_string())
}

impl Bd {
    pub fn neg(self) -> Bd {
        Bd::Neg(Box::new(self))
    }
    pub fn and(self, o: Bd) -> Bd {
        Bd::And(Box::new(self), Box::new(o))
    }
    pub fn or(self, o: Bd) -> Bd {
        Bd::Or(Box::new(self), Box::new(o))
    }
    pub fn nec(self, i: u8) -> Bd {
        Bd::Nec(i, Box::new(self))
    }
    pub fn pos(self, i: u8) -> Bd {
        Bd::Pos(i, Box::new(self))
    }

    pub fn is_modal_free(&self) -> bool {
        match self {
            Bd::Var(_) => true,
            Bd::Neg(a) => a.is_modal_free(),
            Bd::And(a, b) | Bd::Or(a, b) => a.is_modal_free() && b.is_modal_free(),
            Bd::Nec(..) | Bd::Pos(..) => false,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Bd::Var(_) => 0,
            Bd::Neg(a) | Bd::Nec(_, a) | Bd::Pos(_, a) => 1 + a.depth(),
            Bd::And(a, b) | Bd::Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Bd::Var(p) => {
                out.insert(p.clone());
            }
            Bd::Neg(a) | Bd::Nec(_, a) | Bd::Pos(_, a) => a.vars_into(out),
            Bd::And(a, b) | Bd::Or(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        self.vars_into(&mut s);
        s
    }

    pub fn rename(&self, f: &dyn Fn(&str) -> String) -> Bd {
        match self {
            Bd::Var(p) => Bd::Var(f(p)),
            Bd::Neg(a) => a.rename(f).neg(),
            Bd::And(a, b) => a.rename(f).and(b.rename(f)),
            Bd::Or(a, b) => a.rename(f).or(b.rename(f)),
            Bd::Nec(i, a) => a.rename(f).nec(*i),
            Bd::Pos(i, a) => a.rename(f).pos(*i),
        }
    }
}

pub fn atom(tag: Tag, body: Bd) -> Fm {
    Fm::Atom(ModalAtom { tag, body })
}

pub fn pvar(s: &str) -> Fm {
    Fm::Var(s.to_string())
}

impl Fm {
    pub fn neg(self) -> Fm {
        Fm::Neg(Box::new(self))
    }
    pub fn tilde(self) -> Fm {
        Fm::Tilde(Box::new(self))
    }
    pub fn delta(self) -> Fm {
        Fm::Delta(Box::new(self))
    }
    pub fn imp(self, o: Fm) -> Fm {
        Fm::Imp(Box::new(self), Box::new(o))
    }
    pub fn ntilde(self) -> Fm {
        Fm::NTilde(Box::new(self))
    }
    pub fn nimp(self, o: Fm) -> Fm {
        Fm::NImp(Box::new(self), Box::new(o))
    }
    pub fn nand(self, o: Fm) -> Fm {
        Fm::And(Box::new(self), Box::new(o))
    }

    // Łukasiewicz-family derived connectives.
    pub fn lor(self, o: Fm) -> Fm {
        self.imp(o.clone()).imp(o)
    }
    pub fn land(self, o: Fm) -> Fm {
        self.tilde().lor(o.tilde()).tilde()
    }
    pub fn oplus(self, o: Fm) -> Fm {
        self.tilde().imp(o)
    }
    pub fn odot(self, o: Fm) -> Fm {
        self.imp(o.tilde()).tilde()
    }
    pub fn ominus(self, o: Fm) -> Fm {
        self.odot(o.tilde())
    }
    pub fn iff(self, o: Fm) -> Fm {
        self.clone().imp(o.clone()).odot(o.imp(self))
    }

    // NŁ-family derived connectives.
    pub fn n_or(self, o: Fm) -> Fm {
        self.neg().nand(o.neg()).neg()
    }
    pub fn n_odot(self, o: Fm) -> Fm {
        self.nimp(o.ntilde()).ntilde()
    }
    pub fn n_oplus(self, o: Fm) -> Fm {
        self.ntilde().nimp(o)
    }
    pub fn n_ominus(self, o: Fm) -> Fm {
        self.n_odot(o.ntilde())
    }
    pub fn n_iff(self, o: Fm) -> Fm {
        self.clone().nimp(o.clone()).nand(o.nimp(self))
    }

    pub fn map_atoms(&self, f: &mut dyn FnMut(&ModalAtom) -> Fm) -> Fm {
        match self {
            Fm::Var(_) => self.clone(),
            Fm::Atom(a) => f(a),
            Fm::Neg(a) => a.map_atoms(f).neg(),
            Fm::Tilde(a) => a.map_atoms(f).tilde(),
            Fm::Delta(a) => a.map_atoms(f).delta(),
            Fm::NTilde(a) => a.map_atoms(f).ntilde(),
            Fm::Imp(a, b) => {
                let a = a.map_atoms(f);
                a.imp(b.map_atoms(f))
            }
            Fm::NImp(a, b) => {
                let a = a.map_atoms(f);
                a.nimp(b.map_atoms(f))
            }
            Fm::And(a, b) => {
                let a = a.map_atoms(f);
                a.nand(b.map_atoms(f))
            }
        }
    }

    pub fn atoms_into(&self, out: &mut Vec<ModalAtom>) {
        match self {
            Fm::Var(_) => {}
            Fm::Atom(a) => {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
            Fm::Neg(a) | Fm::Tilde(a) | Fm::Delta(a) | Fm::NTilde(a) => a.atoms_into(out),
            Fm::Imp(a, b) | Fm::NImp(a, b) | Fm::And(a, b) => {
                a.atoms_into(out);
                b.atoms_into(out);
            }
        }
    }

    /// Distinct modal atoms in first-occurrence order.
    pub fn atoms(&self) -> Vec<ModalAtom> {
        let mut v = Vec::new();
        self.atoms_into(&mut v);
        v
    }

    pub fn pvars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Fm::Var(p) => {
                out.insert(p.clone());
            }
            Fm::Atom(_) => {}
            Fm::Neg(a) | Fm::Tilde(a) | Fm::Delta(a) | Fm::NTilde(a) => a.pvars_into(out),
            Fm::Imp(a, b) | Fm::NImp(a, b) | Fm::And(a, b) => {
                a.pvars_into(out);
                b.pvars_into(out);
            }
        }
    }

    /// Outer propositional variables.
    pub fn pvars(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        self.pvars_into(&mut s);
        s
    }

    /// Variables occurring inside modal atom bodies.
    pub fn inner_vars(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        for a in self.atoms() {
            a.body.vars_into(&mut s);
        }
        s
    }

    pub fn has_outer_neg(&self) -> bool {
        match self {
            Fm::Var(_) | Fm::Atom(_) => false,
            Fm::Neg(_) => true,
            Fm::Tilde(a) | Fm::Delta(a) | Fm::NTilde(a) => a.has_outer_neg(),
            Fm::Imp(a, b) | Fm::NImp(a, b) | Fm::And(a, b) => {
                a.has_outer_neg() || b.has_outer_neg()
            }
        }
    }

    /// Number of connectives (atoms and variables count 0).
    pub fn size(&self) -> usize {
        match self {
            Fm::Var(_) | Fm::Atom(_) => 0,
            Fm::Neg(a) | Fm::Tilde(a) | Fm::Delta(a) | Fm::NTilde(a) => 1 + a.size(),
            Fm::Imp(a, b) | Fm::NImp(a, b) | Fm::And(a, b) => 1 + a.size() + b.size(),
        }
    }
}

// ---------------------------------------------------------------- lengths

/// Symbol count: binary connectives count their brackets, modalities and
/// measure tags count 2.
pub fn bd_len(f: &Bd) -> usize {
    match f {
        Bd::Var(_) => 1,
        Bd::Neg(a) => 1 + bd_len(a),
        Bd::And(a, b) | Bd::Or(a, b) => 3 + bd_len(a) + bd_len(b),
        Bd::Nec(_, a) | Bd::Pos(_, a) => 2 + bd_len(a),
    }
}

pub fn fm_len(f: &Fm) -> usize {
    match f {
        Fm::Var(_) => 1,
        Fm::Atom(a) => 2 + bd_len(&a.body),
        Fm::Neg(a) | Fm::Tilde(a) | Fm::Delta(a) | Fm::NTilde(a) => 1 + fm_len(a),
        Fm::Imp(a, b) | Fm::NImp(a, b) | Fm::And(a, b) => 3 + fm_len(a) + fm_len(b),
    }
}

// ---------------------------------------------------------------- NNF & vocabulary

/// Negation normal form; under modalities the dual BD modal clauses are used
/// (`¬□φ ⇝ ◇¬φ`, `¬◇φ ⇝ □¬φ`).
pub fn nnf(f: &Bd) -> Bd {
    fn go(f: &Bd, neg: bool) -> Bd {
        match (f, neg) {
            (Bd::Var(_), false) => f.clone(),
            (Bd::Var(_), true) => f.clone().neg(),
            (Bd::Neg(a), n) => go(a, !n),
            (Bd::And(a, b), false) => go(a, false).and(go(b, false)),
            (Bd::And(a, b), true) => go(a, true).or(go(b, true)),
            (Bd::Or(a, b), false) => go(a, false).or(go(b, false)),
            (Bd::Or(a, b), true) => go(a, true).and(go(b, true)),
            (Bd::Nec(i, a), false) => go(a, false).nec(*i),
            (Bd::Nec(i, a), true) => go(a, true).pos(*i),
            (Bd::Pos(i, a), false) => go(a, false).pos(*i),
            (Bd::Pos(i, a), true) => go(a, true).nec(*i),
        }
    }
    go(f, false)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: String,
    pub positive: bool,
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var)
        } else {
            write!(f, "!{}", self.var)
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocab {
    pub props: BTreeSet<String>,
    pub lits: BTreeSet<Literal>,
    pub subformulas: BTreeSet<Bd>,
}

/// Variables, literals (as they occur: `¬p` counts only when applied
/// directly to `p`) and subformulas of an inner formula.
pub fn vocab(f: &Bd) -> Vocab {
    fn go(f: &Bd, v: &mut Vocab) {
        v.subformulas.insert(f.clone());
        match f {
            Bd::Var(p) => {
                v.props.insert(p.clone());
                v.lits.insert(Literal { var: p.clone(), positive: true });
            }
            Bd::Neg(a) => {
                if let Bd::Var(p) = &**a {
                    v.lits.insert(Literal { var: p.clone(), positive: false });
                    v.props.insert(p.clone());
                    v.subformulas.insert((**a).clone());
                } else {
                    go(a, v);
                }
            }
            Bd::And(a, b) | Bd::Or(a, b) => {
                go(a, v);
                go(b, v);
            }
            Bd::Nec(_, a) | Bd::Pos(_, a) => go(a, v),
        }
    }
    let mut v = Vocab::default();
    go(f, &mut v);
    v
}

/// Vocabulary of all modal-atom bodies of an outer formula.
pub fn vocab_outer(f: &Fm) -> Vocab {
    let mut v = Vocab::default();
    for a in f.atoms() {
        let w = vocab(&a.body);
        v.props.extend(w.props);
        v.lits.extend(w.lits);
        v.subformulas.extend(w.subformulas);
    }
    v
}

// ---------------------------------------------------------------- printing

fn write_bd(f: &Bd, out: &mut String) {
    match f {
        Bd::Var(p) => out.push_str(p),
        Bd::Neg(a) => {
            out.push('!');
            write_bd(a, out);
        }
        Bd::And(a, b) | Bd::Or(a, b) => {
            out.push('(');
            write_bd(a, out);
            out.push_str(if matches!(f, Bd::And(..)) { " & " } else { " | " });
            write_bd(b, out);
            out.push(')');
        }
        Bd::Nec(i, a) | Bd::Pos(i, a) => {
            out.push_str(if matches!(f, Bd::Nec(..)) { "[]" } else { "<>" });
            if *i > 0 {
                out.push_str(&i.to_string());
            }
            out.push(' ');
            write_bd(a, out);
        }
    }
}

impl fmt::Display for Bd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_bd(self, &mut s);
        let s = strip_parens(&s);
        f.write_str(s)
    }
}

fn strip_parens(s: &str) -> &str {
    if !(s.starts_with('(') && s.ends_with(')')) {
        return s;
    }
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && i + 1 < s.len() {
            return s;
        }
    }
    &s[1..s.len() - 1]
}

impl fmt::Display for ModalAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_bd(&self.body, &mut s);
        write!(f, "{} {}", self.tag.keyword(), s)
    }
}

/// Recognised derived-connective shapes, for re-sugaring.
enum Sugar<'a> {
    Or(&'a Fm, &'a Fm),
    And(&'a Fm, &'a Fm),
    Oplus(&'a Fm, &'a Fm),
    Odot(&'a Fm, &'a Fm),
    Ominus(&'a Fm, &'a Fm),
    Iff(&'a Fm, &'a Fm),
}

fn sugar(f: &Fm) -> Option<Sugar<'_>> {
    match f {
        // Łukasiewicz family
        Fm::Imp(l, r) => {
            if let Fm::Imp(a, b) = &**l {
                if b == r {
                    return Some(Sugar::Or(a, r));
                }
            }
            if let Fm::Tilde(a) = &**l {
                return Some(Sugar::Oplus(a, r));
            }
            None
        }
        Fm::Tilde(inner) => {
            let Fm::Imp(l, r) = &**inner else { return None };
            // ∼(∼a ∨ ∼b) with ∨ unfolded
            if let (Fm::Imp(ta, tb), Fm::Tilde(b)) = (&**l, &**r) {
                if let Fm::Tilde(a) = &**ta {
                    if tb == r {
                        return Some(Sugar::And(a, b));
                    }
                }
            }
            let Fm::Tilde(b) = &**r else { return None };
            if let Fm::Imp(a1, b1) = &**l {
                if let Fm::Imp(b2, a2) = &**b {
                    if a1 == a2 && b1 == b2 {
                        return Some(Sugar::Iff(a1, b1));
                    }
                }
            }
            if let Fm::Tilde(c) = &**b {
                return Some(Sugar::Ominus(l, c));
            }
            Some(Sugar::Odot(l, b))
        }
        // NŁ family
        Fm::Neg(inner) => {
            let Fm::And(l, r) = &**inner else { return None };
            match (&**l, &**r) {
                (Fm::Neg(a), Fm::Neg(b)) => Some(Sugar::Or(a, b)),
                _ => None,
            }
        }
        Fm::NTilde(inner) => {
            let Fm::NImp(a, r) = &**inner else { return None };
            let Fm::NTilde(b) = &**r else { return None };
            if let Fm::NTilde(c) = &**b {
                return Some(Sugar::Ominus(a, c));
            }
            Some(Sugar::Odot(a, b))
        }
        Fm::NImp(l, r) => {
            if let Fm::NTilde(a) = &**l {
                return Some(Sugar::Oplus(a, r));
            }
            None
        }
        Fm::And(l, r) => {
            if let (Fm::NImp(a1, b1), Fm::NImp(b2, a2)) = (&**l, &**r) {
                if a1 == a2 && b1 == b2 {
                    return Some(Sugar::Iff(a1, b1));
                }
            }
            None
        }
        _ => None,
    }
}

fn write_fm(f: &Fm, out: &mut String, resugar: bool) {
    let bin = |a: &Fm, op: &str, b: &Fm, out: &mut String| {
        out.push('(');
        write_fm(a, out, resugar);
        out.push(' ');
        out.push_str(op);
        out.push(' ');
        write_fm(b, out, resugar);
        out.push(')');
    };
    if resugar {
        if let Some(s) = sugar(f) {
            match s {
                Sugar::Or(a, b) => bin(a, "|", b, out),
                Sugar::And(a, b) => bin(a, "&", b, out),
                Sugar::Oplus(a, b) => bin(a, "(+)", b, out),
                Sugar::Odot(a, b) => bin(a, "(.)", b, out),
                Sugar::Ominus(a, b) => bin(a, "(-)", b, out),
                Sugar::Iff(a, b) => bin(a, "<->", b, out),
            }
            return;
        }
    }
    match f {
        Fm::Var(p) => out.push_str(p),
        Fm::Atom(a) => out.push_str(&a.to_string()),
        Fm::Neg(a) => {
            out.push('!');
            write_fm(a, out, resugar);
        }
        Fm::Tilde(a) | Fm::NTilde(a) => {
            out.push('~');
            write_fm(a, out, resugar);
        }
        Fm::Delta(a) => {
            out.push('#');
            write_fm(a, out, resugar);
        }
        Fm::Imp(a, b) | Fm::NImp(a, b) => bin(a, "->", b, out),
        Fm::And(a, b) => bin(a, "&", b, out),
    }
}

impl fmt::Display for Fm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_fm(self, &mut s, true);
        f.write_str(strip_parens(&s))
    }
}

/// Printing with every derived connective left expanded.
pub fn print_primitive(f: &Fm) -> String {
    let mut s = String::new();
    write_fm(f, &mut s, false);
    strip_parens(&s).to_string()
}

// ---------------------------------------------------------------- parsing

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("connective `{conn}` at {pos} is not available in {logic}")]
    WrongConnective { pos: usize, conn: String, logic: LogicId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Kw(Tag),
    Bang,
    Tilde,
    Hash,
    Amp,
    Bar,
    Arrow,
    Iff,
    Oplus,
    Odot,
    Ominus,
    LParen,
    RParen,
    BoxOp(u8),
    DiaOp(u8),
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Ident(s) => s.clone(),
            Tok::Kw(t) => t.keyword().to_string(),
            Tok::Bang => "!".into(),
            Tok::Tilde => "~".into(),
            Tok::Hash => "#".into(),
            Tok::Amp => "&".into(),
            Tok::Bar => "|".into(),
            Tok::Arrow => "->".into(),
            Tok::Iff => "<->".into(),
            Tok::Oplus => "(+)".into(),
            Tok::Odot => "(.)".into(),
            Tok::Ominus => "(-)".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::BoxOp(i) => format!("[]{}", if *i > 0 { i.to_string() } else { String::new() }),
            Tok::DiaOp(i) => format!("<>{}", if *i > 0 { i.to_string() } else { String::new() }),
        }
    }
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    let err = |pos: usize, msg: &str| ParseError::Syntax { pos, msg: msg.to_string() };
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &s[i..];
        let modal_index = |j: usize| -> (u8, usize) {
            match b.get(j) {
                Some(b'1') => (1, j + 1),
                Some(b'2') => (2, j + 1),
                _ => (0, j),
            }
        };
        let tok = if rest.starts_with("(+)") {
            i += 3;
            Tok::Oplus
        } else if rest.starts_with("(.)") {
            i += 3;
            Tok::Odot
        } else if rest.starts_with("(-)") {
            i += 3;
            Tok::Ominus
        } else if rest.starts_with("<->") {
            i += 3;
            Tok::Iff
        } else if rest.starts_with("->") {
            i += 2;
            Tok::Arrow
        } else if rest.starts_with("[]") {
            let (k, j) = modal_index(i + 2);
            i = j;
            Tok::BoxOp(k)
        } else if rest.starts_with("<>") {
            let (k, j) = modal_index(i + 2);
            i = j;
            Tok::DiaOp(k)
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let mut j = i;
            while j < b.len() && (b[j].is_ascii_alphanumeric() || b[j] == b'_' || b[j] == b'\'') {
                j += 1;
            }
            let word = &s[i..j];
            i = j;
            match Tag::from_keyword(word) {
                Some(t) => Tok::Kw(t),
                None => Tok::Ident(word.to_string()),
            }
        } else {
            i += 1;
            match c {
                b'!' => Tok::Bang,
                b'~' => Tok::Tilde,
                b'#' => Tok::Hash,
                b'&' => Tok::Amp,
                b'|' => Tok::Bar,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                _ => return Err(err(start, &format!("unexpected character `{}`", c as char))),
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Outer(Fm),
    Inner(Bd),
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    logic: Option<LogicId>,
    allow_reserved: bool,
    _src: &'a str,
}

type PResult<T> = Result<T, ParseError>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }
    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }
    fn syntax<T>(&self, msg: &str) -> PResult<T> {
        Err(ParseError::Syntax { pos: self.pos(), msg: msg.to_string() })
    }
    fn expect_rparen(&mut self) -> PResult<()> {
        match self.bump() {
            Some(Tok::RParen) => Ok(()),
            _ => {
                self.at -= 1;
                self.syntax("expected `)`")
            }
        }
    }
    fn wrong(&self, pos: usize, conn: &str) -> ParseError {
        ParseError::WrongConnective {
            pos,
            conn: conn.to_string(),
            logic: self.logic.expect("logic-bound parser"),
        }
    }
    fn nelson(&self) -> bool {
        self.logic.map(|l| l.nelson()).unwrap_or(false)
    }
    fn check_ident(&self, name: &str, pos: usize) -> PResult<()> {
        if !self.allow_reserved && name.ends_with(RESERVED_SUFFIX) {
            return Err(ParseError::Syntax {
                pos,
                msg: format!("identifier `{name}` uses the reserved suffix `{RESERVED_SUFFIX}`"),
            });
        }
        Ok(())
    }

    // ---- inner layer

    fn inner_or(&mut self, modal_ok: Option<&[u8]>) -> PResult<Bd> {
        let mut l = self.inner_and(modal_ok)?;
        while self.peek() == Some(&Tok::Bar) {
            self.bump();
            let r = self.inner_and(modal_ok)?;
            l = l.or(r);
        }
        Ok(l)
    }

    fn inner_and(&mut self, modal_ok: Option<&[u8]>) -> PResult<Bd> {
        let mut l = self.inner_unary(modal_ok)?;
        while self.peek() == Some(&Tok::Amp) {
            self.bump();
            let r = self.inner_unary(modal_ok)?;
            l = l.and(r);
        }
        Ok(l)
    }

    fn inner_unary(&mut self, modal_ok: Option<&[u8]>) -> PResult<Bd> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Bang) => Ok(self.inner_unary(modal_ok)?.neg()),
            Some(Tok::Ident(p)) => {
                self.check_ident(&p, pos)?;
                Ok(Bd::Var(p))
            }
            Some(Tok::LParen) => {
                let f = self.inner_or(modal_ok)?;
                self.expect_rparen()?;
                Ok(f)
            }
            Some(t @ (Tok::BoxOp(i) | Tok::DiaOp(i))) => {
                let ok = match modal_ok {
                    Some(idx) => idx.contains(&i),
                    None => self.logic.is_none(),
                };
                if !ok {
                    return match self.logic {
                        Some(_) => Err(self.wrong(pos, &t.text())),
                        None => Err(ParseError::Syntax { pos, msg: "modality not allowed".into() }),
                    };
                }
                let a = self.inner_unary(modal_ok)?;
                Ok(if matches!(t, Tok::BoxOp(_)) { a.nec(i) } else { a.pos(i) })
            }
            Some(t) => {
                self.at -= 1;
                self.syntax(&format!("unexpected `{}` in inner formula", t.text()))
            }
            None => self.syntax("unexpected end of input"),
        }
    }

    // ---- outer layer

    fn outer_iff(&mut self) -> PResult<Fm> {
        let mut l = self.outer_imp()?;
        while self.peek() == Some(&Tok::Iff) {
            self.bump();
            let r = self.outer_imp()?;
            l = if self.nelson() { l.n_iff(r) } else { l.iff(r) };
        }
        Ok(l)
    }

    fn outer_imp(&mut self) -> PResult<Fm> {
        let l = self.outer_or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let r = self.outer_imp()?;
            return Ok(if self.nelson() { l.nimp(r) } else { l.imp(r) });
        }
        Ok(l)
    }

    fn outer_or(&mut self) -> PResult<Fm> {
        let mut l = self.outer_and()?;
        while self.peek() == Some(&Tok::Bar) {
            self.bump();
            let r = self.outer_and()?;
            l = if self.nelson() { l.n_or(r) } else { l.lor(r) };
        }
        Ok(l)
    }

    fn outer_and(&mut self) -> PResult<Fm> {
        let mut l = self.outer_plus()?;
        while self.peek() == Some(&Tok::Amp) {
            self.bump();
            let r = self.outer_plus()?;
            l = if self.nelson() { l.nand(r) } else { l.land(r) };
        }
        Ok(l)
    }

    fn outer_plus(&mut self) -> PResult<Fm> {
        let mut l = self.outer_dot()?;
        loop {
            match self.peek() {
                Some(Tok::Oplus) => {
                    self.bump();
                    let r = self.outer_dot()?;
                    l = if self.nelson() { l.n_oplus(r) } else { l.oplus(r) };
                }
                Some(Tok::Ominus) => {
                    self.bump();
                    let r = self.outer_dot()?;
                    l = if self.nelson() { l.n_ominus(r) } else { l.ominus(r) };
                }
                _ => return Ok(l),
            }
        }
    }

    fn outer_dot(&mut self) -> PResult<Fm> {
        let mut l = self.outer_unary()?;
        while self.peek() == Some(&Tok::Odot) {
            self.bump();
            let r = self.outer_unary()?;
            l = if self.nelson() { l.n_odot(r) } else { l.odot(r) };
        }
        Ok(l)
    }

    fn outer_unary(&mut self) -> PResult<Fm> {
        let logic = self.logic.expect("outer parsing needs a logic");
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Bang) => {
                if !logic.has_outer_neg() {
                    return Err(self.wrong(pos, "!"));
                }
                Ok(self.outer_unary()?.neg())
            }
            Some(Tok::Tilde) => {
                let a = self.outer_unary()?;
                Ok(if logic.nelson() { a.ntilde() } else { a.tilde() })
            }
            Some(Tok::Hash) => {
                if logic.nelson() {
                    return Err(self.wrong(pos, "#"));
                }
                Ok(self.outer_unary()?.delta())
            }
            Some(Tok::LParen) => {
                let f = self.outer_iff()?;
                self.expect_rparen()?;
                Ok(f)
            }
            Some(Tok::Ident(p)) => {
                if !logic.propositional() {
                    return Err(ParseError::Syntax {
                        pos,
                        msg: format!("bare variable `{p}` at the outer layer of {logic}"),
                    });
                }
                self.check_ident(&p, pos)?;
                Ok(Fm::Var(p))
            }
            Some(Tok::Kw(tag)) => {
                if !logic.tags().contains(&tag) {
                    return Err(self.wrong(pos, tag.keyword()));
                }
                let body = self.atom_body(logic, tag)?;
                Ok(atom(tag, body))
            }
            Some(t) => {
                self.at -= 1;
                self.syntax(&format!("unexpected `{}`", t.text()))
            }
            None => self.syntax("unexpected end of input"),
        }
    }

    fn atom_body(&mut self, logic: LogicId, tag: Tag) -> PResult<Bd> {
        let pos = self.pos();
        let (head, allowed): (Option<u8>, &[u8]) = match (logic, tag) {
            (LogicId::ProbS5, _) => (Some(0), &[0]),
            (LogicId::ProbNLukS5, Tag::Pr1) => (Some(1), &[1, 2]),
            (LogicId::ProbNLukS5, Tag::Pr2) => (Some(2), &[1, 2]),
            _ => (None, &[]),
        };
        let body = self.inner_unary(Some(allowed))?;
        if let Some(h) = head {
            let ok = matches!(&body, Bd::Nec(i, _) | Bd::Pos(i, _) if *i == h);
            if !ok {
                return Err(ParseError::Syntax {
                    pos,
                    msg: format!("the body of `{}` must start with a matching modality", tag.keyword()),
                });
            }
        }
        Ok(body)
    }
}

fn parse_with(text: &str, logic: Option<LogicId>, allow_reserved: bool) -> PResult<Parsed> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len(), logic, allow_reserved, _src: text };
    let out = match logic {
        Some(_) => Parsed::Outer(p.outer_iff()?),
        None => Parsed::Inner(p.inner_or(None)?),
    };
    if p.at < p.toks.len() {
        return p.syntax("trailing input");
    }
    Ok(out)
}

/// Parses an outer formula of `logic`.
pub fn parse(text: &str, logic: LogicId) -> PResult<Fm> {
    match parse_with(text, Some(logic), false)? {
        Parsed::Outer(f) => Ok(f),
        Parsed::Inner(_) => unreachable!(),
    }
}

/// Like [`parse`], but accepts identifiers with the reserved suffix.
pub fn parse_internal(text: &str, logic: LogicId) -> PResult<Fm> {
    match parse_with(text, Some(logic), true)? {
        Parsed::Outer(f) => Ok(f),
        Parsed::Inner(_) => unreachable!(),
    }
}

/// Parses an inner BD formula; modalities allowed.
pub fn parse_bd(text: &str) -> PResult<Bd> {
    match parse_with(text, None, false)? {
        Parsed::Inner(f) => Ok(f),
        Parsed::Outer(_) => unreachable!(),
    }
}

pub fn parse_bd_internal(text: &str) -> PResult<Bd> {
    match parse_with(text, None, true)? {
        Parsed::Inner(f) => Ok(f),
        Parsed::Outer(_) => unreachable!(),
    }
}

/// Non-empty, non-comment lines of a formula file (`;` starts a comment).
pub fn formula_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let l = l.split(';').next().unwrap_or("").trim();
            (!l.is_empty()).then_some((i + 1, l))
        })
        .collect()
}

/// Checks that `f` uses only the connectives and tags of `logic`.
pub fn conforms(f: &Fm, logic: LogicId) -> bool {
    match f {
        Fm::Var(_) => logic.propositional(),
        Fm::Atom(a) => {
            if !logic.tags().contains(&a.tag) {
                return false;
            }
            match logic {
                LogicId::ProbS5 => {
                    matches!(&a.body, Bd::Nec(0, _) | Bd::Pos(0, _)) && modal_indices(&a.body, &[0])
                }
                LogicId::ProbNLukS5 => {
                    let h = if a.tag == Tag::Pr1 { 1 } else { 2 };
                    matches!(&a.body, Bd::Nec(i, _) | Bd::Pos(i, _) if *i == h)
                        && modal_indices(&a.body, &[1, 2])
                }
                _ => a.body.is_modal_free(),
            }
        }
        Fm::Neg(a) => logic.has_outer_neg() && conforms(a, logic),
        Fm::Tilde(a) | Fm::Delta(a) => !logic.nelson() && conforms(a, logic),
        Fm::Imp(a, b) => !logic.nelson() && conforms(a, logic) && conforms(b, logic),
        Fm::NTilde(a) => logic.nelson() && conforms(a, logic),
        Fm::NImp(a, b) | Fm::And(a, b) => logic.nelson() && conforms(a, logic) && conforms(b, logic),
    }
}

fn modal_indices(f: &Bd, ok: &[u8]) -> bool {
    match f {
        Bd::Var(_) => true,
        Bd::Neg(a) => modal_indices(a, ok),
        Bd::And(a, b) | Bd::Or(a, b) => modal_indices(a, ok) && modal_indices(b, ok),
        Bd::Nec(i, a) | Bd::Pos(i, a) => ok.contains(i) && modal_indices(a, ok),
    }
}
