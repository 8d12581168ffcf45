//! Seeded random formulas for fuzzing and property tests.

use crate::syntax::{atom, pvar, Bd, Fm, LogicId, Tag};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_bd(rng: &mut ChaCha8Rng, vars: &[&str], depth: usize) -> Bd {
    if depth == 0 || rng.gen_bool(0.3) {
        return Bd::Var(vars[rng.gen_range(0..vars.len())].to_string());
    }
    match rng.gen_range(0..3) {
        0 => random_bd(rng, vars, depth - 1).neg(),
        1 => random_bd(rng, vars, depth - 1).and(random_bd(rng, vars, depth - 1)),
        _ => random_bd(rng, vars, depth - 1).or(random_bd(rng, vars, depth - 1)),
    }
}

/// A body with modalities of index `i`, wrapped in `□ᵢ` or `◇ᵢ`.
pub fn random_modal_body(rng: &mut ChaCha8Rng, vars: &[&str], depth: usize, i: u8, nest: bool) -> Bd {
    let inner = if nest && depth > 1 && rng.gen_bool(0.2) {
        let sub = random_modal_body(rng, vars, depth - 1, i, false);
        match rng.gen_range(0..3) {
            0 => sub,
            1 => sub.and(random_bd(rng, vars, depth - 1)),
            _ => sub.or(random_bd(rng, vars, depth - 1)),
        }
    } else {
        random_bd(rng, vars, depth)
    };
    if rng.gen_bool(0.5) {
        inner.nec(i)
    } else {
        inner.pos(i)
    }
}

fn random_atom(rng: &mut ChaCha8Rng, logic: LogicId, vars: &[&str], inner_depth: usize) -> Fm {
    let tags = logic.tags();
    let tag = tags[rng.gen_range(0..tags.len())];
    let body = match logic {
        LogicId::ProbS5 => random_modal_body(rng, vars, inner_depth, 0, true),
        LogicId::ProbNLukS5 => random_modal_body(rng, vars, inner_depth, if tag == Tag::Pr1 { 1 } else { 2 }, true),
        _ => random_bd(rng, vars, inner_depth),
    };
    atom(tag, body)
}

/// A formula of `logic` over `vars` (propositional variables or inner
/// variables of modal atoms), with at most `depth` outer connectives on any path.
pub fn random_formula(rng: &mut ChaCha8Rng, logic: LogicId, vars: &[&str], depth: usize, inner_depth: usize) -> Fm {
    if depth == 0 || rng.gen_bool(0.25) {
        return if logic.propositional() {
            pvar(vars[rng.gen_range(0..vars.len())])
        } else {
            random_atom(rng, logic, vars, inner_depth)
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, logic, vars, depth - 1, inner_depth);
    if logic.nelson() {
        return match rng.gen_range(0..5) {
            0 => sub(rng).neg(),
            1 => sub(rng).ntilde(),
            2 => sub(rng).nand(sub(rng)),
            3 => sub(rng).n_oplus(sub(rng)),
            _ => sub(rng).nimp(sub(rng)),
        };
    }
    let k = rng.gen_range(0..if logic.has_outer_neg() { 8 } else { 7 });
    match k {
        0 => sub(rng).tilde(),
        1 => sub(rng).delta(),
        2 => sub(rng).oplus(sub(rng)),
        3 => sub(rng).odot(sub(rng)),
        4 => sub(rng).land(sub(rng)),
        5 => sub(rng).lor(sub(rng)),
        6 => sub(rng).imp(sub(rng)),
        _ => sub(rng).neg(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::conforms;
    use rand::SeedableRng;

    #[test]
    fn generated_formulas_conform() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for logic in LogicId::ALL {
            for _ in 0..200 {
                let f = random_formula(&mut rng, logic, &["p", "q"], 3, 2);
                assert!(conforms(&f, logic), "{} {f}", logic.name());
            }
        }
    }
}
