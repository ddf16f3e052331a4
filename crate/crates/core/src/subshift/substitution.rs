use std::collections::BTreeSet;

use super::{Alphabet, OrbitWindow, SubshiftSpec, Symbol, Word};
use crate::error::{invalid, Error, Result};

/// Upper bound on applications of the (powered) substitution while growing
/// either half of the fixed point.
const MAX_ITERATIONS: usize = 256;

pub(super) fn validate(alphabet: &Alphabet, rules: &[Word], seed: (Symbol, Symbol)) -> Result<()> {
    if rules.len() != alphabet.len() {
        return Err(invalid(format!(
            "{} substitution rules for an alphabet of {} letters",
            rules.len(),
            alphabet.len()
        )));
    }
    for (s, image) in rules.iter().enumerate() {
        if image.is_empty() {
            return Err(invalid(format!("empty image for letter {:?}", alphabet.label(s))));
        }
        alphabet.check(image)?;
    }
    if seed.0 >= alphabet.len() || seed.1 >= alphabet.len() {
        return Err(invalid("seed letter outside alphabet"));
    }
    Ok(())
}

/// Every two-letter word that occurs in `σ^j(c)` for some letter `c` and
/// some `j ≥ 1`.
///
/// The two-words of `σ^{j+1}(c)` are those inside single images plus
/// `last(σ(x))·first(σ(y))` for each two-word `xy` of `σ^j(c)`, so the
/// closure over a finite set is exact.
pub fn legal_two_words(rules: &[Word]) -> BTreeSet<(Symbol, Symbol)> {
    let mut legal: BTreeSet<(Symbol, Symbol)> = rules
        .iter()
        .flat_map(|w| w.0.windows(2).map(|p| (p[0], p[1])).collect::<Vec<_>>())
        .collect();
    loop {
        let boundary: Vec<(Symbol, Symbol)> = legal
            .iter()
            .map(|&(x, y)| (*rules[x].0.last().unwrap(), rules[y].0[0]))
            .filter(|p| !legal.contains(p))
            .collect();
        if boundary.is_empty() {
            return legal;
        }
        legal.extend(boundary);
    }
}

/// Smallest `k ≥ 1` with `f^k(s) = s`, if `s` is periodic under `f`.
fn return_time(s: Symbol, f: impl Fn(Symbol) -> Symbol, size: usize) -> Option<usize> {
    let mut x = s;
    for k in 1..=size {
        x = f(x);
        if x == s {
            return Some(k);
        }
    }
    None
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Applies `σ` once, keeping at most `keep` symbols from the front or back.
fn apply(rules: &[Word], word: &[Symbol], keep: usize, from_back: bool) -> Vec<Symbol> {
    if from_back {
        let mut out: Vec<Symbol> = Vec::with_capacity(keep);
        for &s in word.iter().rev() {
            for &t in rules[s].0.iter().rev() {
                if out.len() == keep {
                    break;
                }
                out.push(t);
            }
            if out.len() == keep {
                break;
            }
        }
        out.reverse();
        out
    } else {
        let mut out = Vec::with_capacity(keep);
        for &s in word {
            for &t in &rules[s].0 {
                if out.len() == keep {
                    return out;
                }
                out.push(t);
            }
        }
        out
    }
}

fn grow(rules: &[Word], start: Symbol, power: usize, needed: usize, from_back: bool) -> Result<Vec<Symbol>> {
    let mut word = vec![start];
    for _ in 0..MAX_ITERATIONS {
        if word.len() >= needed {
            return Ok(word);
        }
        let mut next = word.clone();
        for _ in 0..power {
            next = apply(rules, &next, needed, from_back);
        }
        if next.len() == word.len() {
            break;
        }
        word = next;
    }
    if word.len() >= needed {
        Ok(word)
    } else {
        Err(Error::BudgetExceeded {
            needed,
            reached: word.len(),
        })
    }
}

/// Builds `ω(−N..=N)` for the two-sided fixed point of a power of the
/// substitution through the legal pair `seed = (left, right)`.
///
/// `ω(0..=N)` is a prefix of the right-infinite fixed point starting with
/// `right`; `ω(−N..=−1)` is a suffix of the left-infinite fixed point ending
/// with `left`.
pub fn build_substitution_orbit(
    alphabet: &Alphabet,
    rules: &[Word],
    seed: (Symbol, Symbol),
    radius: usize,
) -> Result<OrbitWindow> {
    validate(alphabet, rules, seed)?;
    let (left, right) = seed;
    let nonextendable = Error::NonExtendableSeed { left, right };
    if !legal_two_words(rules).contains(&seed) {
        return Err(nonextendable);
    }
    let size = alphabet.len();
    let first = |s: Symbol| rules[s].0[0];
    let last = |s: Symbol| *rules[s].0.last().unwrap();
    let (Some(kr), Some(kl)) = (return_time(right, first, size), return_time(left, last, size)) else {
        return Err(nonextendable);
    };
    let power = kr / gcd(kr, kl) * kl;

    let right_half = grow(rules, right, power, radius + 1, false)?;
    let left_half = if radius == 0 {
        Vec::new()
    } else {
        grow(rules, left, power, radius, true)?
    };

    let mut symbols = Vec::with_capacity(2 * radius + 1);
    symbols.extend_from_slice(&left_half[left_half.len() - radius..]);
    symbols.extend_from_slice(&right_half[..radius + 1]);
    let spec = SubshiftSpec::Substitution {
        alphabet: alphabet.clone(),
        rules: rules.to_vec(),
        seed,
    };
    Ok(OrbitWindow::from_parts(spec, radius, symbols))
}
