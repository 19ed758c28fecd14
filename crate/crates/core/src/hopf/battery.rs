//! Deterministic test batteries of K_1 elements.

use super::structure::centered_word;
use crate::algebra::{AlgElt, Ctx, GenSym, QCoeff, Word};
use crate::error::QResult;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatterySpec {
    pub max_degree: usize,
    /// Generator subset in text form (`u[1,2]`, `u*[2,2]`, `Dinv`); empty means
    /// all generators of the context including stars.
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default)]
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
}

impl BatterySpec {
    pub fn new(max_degree: usize) -> Self {
        BatterySpec { max_degree, generators: Vec::new(), count: 0, seed: 0 }
    }
}

pub fn parse_generator(ctx: Ctx, s: &str) -> QResult<GenSym> {
    let e = crate::algebra::parse_elt(ctx, s)?;
    let mut it = e.terms();
    match (it.next(), it.next()) {
        (Some((w, c)), None) if w.len() == 1 && c.is_one() => Ok(w[0]),
        _ => Err(crate::QError::Parse(format!("'{}' is not a single generator", s))),
    }
}

/// All words of length 1..=max_deg over the letters, shortest first.
pub fn words_up_to(letters: &[GenSym], max_deg: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut frontier: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_deg {
        let mut next = Vec::with_capacity(frontier.len() * letters.len());
        for w in &frontier {
            for &g in letters {
                let mut nw = w.clone();
                nw.push(g);
                next.push(nw);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Centered words of degree 1..=max_degree over the generator subset, then
/// `count` seeded random rational combinations of them.
pub fn k1_battery(ctx: Ctx, spec: &BatterySpec) -> QResult<Vec<AlgElt>> {
    let gens: Vec<GenSym> = if spec.generators.is_empty() {
        ctx.generators(true)
    } else {
        spec.generators.iter().map(|s| parse_generator(ctx, s)).collect::<QResult<_>>()?
    };
    let words = words_up_to(&gens, spec.max_degree);
    let mut out: Vec<AlgElt> = words.iter().map(|w| centered_word(ctx, w)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..spec.count {
        let mut a = AlgElt::zero(ctx);
        for _ in 0..rng.gen_range(2..=4) {
            let w = &words[rng.gen_range(0..words.len())];
            let c = QCoeff::from_ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4));
            let ci = QCoeff::from_ratio(rng.gen_range(-3..=3), rng.gen_range(1..=4)) * QCoeff::i();
            a = a + centered_word(ctx, w).scale(&(c + ci));
        }
        if !a.is_zero() {
            out.push(a);
        }
    }
    Ok(out)
}

/// Pairs of battery elements sampled deterministically.
pub fn sample_pairs(n: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
}
