//! Free-group words, random presentation samplers, and the block lift that
//! rewrites a length-l presentation over generators indexing length-l/3
//! reduced words.

use std::collections::HashSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::RngSeed;

/// One letter of the symmetrized alphabet: a generator or its inverse.
/// The derived order (generator ascending, plain before inverted) is the
/// lexicographic order used everywhere, and `index` is its numeric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inverted: bool,
}

impl Letter {
    pub fn new(gen: usize, inverted: bool) -> Self {
        Letter { gen, inverted }
    }

    pub fn index(&self) -> usize {
        2 * self.gen + usize::from(self.inverted)
    }

    pub fn from_index(i: usize) -> Self {
        Letter {
            gen: i / 2,
            inverted: i % 2 == 1,
        }
    }

    pub fn inverse(&self) -> Self {
        Letter {
            gen: self.gen,
            inverted: !self.inverted,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// No adjacent letter is followed by its own inverse.
    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[1] != w[0].inverse())
    }

    /// Reduced, and additionally the first letter is not the inverse of the
    /// last, so every cyclic rotation is reduced too.
    pub fn is_cyclically_reduced(&self) -> bool {
        if !self.is_reduced() {
            return false;
        }
        match (self.0.first(), self.0.last()) {
            (Some(f), Some(l)) => *f != l.inverse(),
            _ => true,
        }
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(Letter::inverse).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresentationKind {
    Triangular,
    Gromov { l: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<Word>,
    pub kind: PresentationKind,
}

impl Presentation {
    /// Validates letter ranges and the length/reduction discipline the kind
    /// demands of every relator.
    pub fn new(generators: usize, relators: Vec<Word>, kind: PresentationKind) -> Result<Self> {
        if generators == 0 {
            return Err(Error::Parameter("need at least one generator".into()));
        }
        let expected = match kind {
            PresentationKind::Triangular => 3,
            PresentationKind::Gromov { l } => {
                if l < 3 {
                    return Err(Error::Parameter(format!(
                        "relator length must be at least 3, got {l}"
                    )));
                }
                l
            }
        };
        for w in &relators {
            if w.len() != expected {
                return Err(Error::RelatorLength {
                    expected,
                    got: w.len(),
                });
            }
            for letter in w.letters() {
                if letter.gen >= generators {
                    return Err(Error::EndpointOutOfRange {
                        vertex: letter.gen,
                        m: generators,
                    });
                }
            }
            if !w.is_cyclically_reduced() {
                return Err(Error::NotReduced);
            }
        }
        Ok(Presentation {
            generators,
            relators,
            kind,
        })
    }
}

const ENUM_MAX_LENGTH: usize = 3;

/// All cyclically reduced words of the given length over m generators, in
/// lexicographic order, as distinct letter sequences (no quotient by
/// rotation or inversion). Longer lengths must go through the counting and
/// sampling paths instead of materializing.
pub fn enumerate_cyclically_reduced(m: usize, length: usize) -> Result<Vec<Word>> {
    if m == 0 {
        return Err(Error::Parameter("need at least one generator".into()));
    }
    if length == 0 || length > ENUM_MAX_LENGTH {
        return Err(Error::TooLarge {
            got: length,
            cap: ENUM_MAX_LENGTH,
        });
    }
    let letters: Vec<Letter> = (0..2 * m).map(Letter::from_index).collect();
    let mut out = Vec::new();
    let mut cur: Vec<Letter> = Vec::with_capacity(length);
    fn rec(letters: &[Letter], length: usize, cur: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if cur.len() == length {
            let w = Word(cur.clone());
            if w.is_cyclically_reduced() {
                out.push(w);
            }
            return;
        }
        for &l in letters {
            cur.push(l);
            rec(letters, length, cur, out);
            cur.pop();
        }
    }
    rec(&letters, length, &mut cur, &mut out);
    Ok(out)
}

/// Lexicographically ranked space of cyclically reduced length-3 words over
/// m generators, supporting random access without materialization.
#[derive(Debug, Clone, Copy)]
pub struct TriangularWordSpace {
    pub m: usize,
}

impl TriangularWordSpace {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parameter("need at least one generator".into()));
        }
        Ok(TriangularWordSpace { m })
    }

    /// Per first letter: the repeated-letter branch leaves 2m-1 final
    /// choices, the 2m-2 distinct second letters leave 2m-2 each.
    fn per_first(&self) -> u128 {
        let a = 2 * self.m as u128;
        (a - 1) + (a - 2) * (a - 2)
    }

    pub fn total(&self) -> u128 {
        2 * self.m as u128 * self.per_first()
    }

    pub fn unrank(&self, rank: u128) -> Result<Word> {
        if rank >= self.total() {
            return Err(Error::Parameter(format!(
                "rank {rank} out of range {}",
                self.total()
            )));
        }
        let a = 2 * self.m;
        let w0 = Letter::from_index((rank / self.per_first()) as usize);
        let mut rem = rank % self.per_first();
        for i in 0..a {
            let w1 = Letter::from_index(i);
            if w1 == w0.inverse() {
                continue;
            }
            let block: u128 = if w1 == w0 { a as u128 - 1 } else { a as u128 - 2 };
            if rem >= block {
                rem -= block;
                continue;
            }
            let mut count = rem as usize;
            for j in 0..a {
                let w2 = Letter::from_index(j);
                if w2 == w1.inverse() || w2 == w0.inverse() {
                    continue;
                }
                if count == 0 {
                    return Ok(Word(vec![w0, w1, w2]));
                }
                count -= 1;
            }
        }
        unreachable!("rank arithmetic exhausted the block structure");
    }

    pub fn rank(&self, w: &Word) -> Result<u128> {
        if w.len() != 3 || !w.is_cyclically_reduced() {
            return Err(Error::NotReduced);
        }
        let a = 2 * self.m;
        let (w0, w1, w2) = (w.0[0], w.0[1], w.0[2]);
        let mut r = w0.index() as u128 * self.per_first();
        for i in 0..a {
            let c = Letter::from_index(i);
            if c == w0.inverse() {
                continue;
            }
            if c == w1 {
                break;
            }
            r += if c == w0 { a as u128 - 1 } else { a as u128 - 2 };
        }
        for j in 0..a {
            let c = Letter::from_index(j);
            if c == w1.inverse() || c == w0.inverse() {
                continue;
            }
            if c == w2 {
                break;
            }
            r += 1;
        }
        Ok(r)
    }
}

/// Lexicographically ranked space of cyclically reduced length-l words over
/// k generators, backed by a completion-count table. Counts depend on the
/// running letter only through its relation to the first letter, so the
/// table has three columns: equal, inverse, other.
#[derive(Debug, Clone)]
pub struct CyclicWordSpace {
    pub k: usize,
    pub l: usize,
    table: Vec<[u128; 3]>,
}

impl CyclicWordSpace {
    pub fn new(k: usize, l: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parameter("need at least one generator".into()));
        }
        if l < 3 {
            return Err(Error::Parameter(format!(
                "relator length must be at least 3, got {l}"
            )));
        }
        let o = 2 * k as u128 - 2;
        let o2 = (2 * k as u128).saturating_sub(3);
        let mut table = vec![[0u128; 3]; l];
        // A finished word may not end in the inverse of the first letter.
        table[0] = [1, 0, 1];
        for r in 1..l {
            let prev = table[r - 1];
            let step = |s: Option<u128>| s.ok_or(Error::EnumerationTooLarge {
                estimate: u128::MAX,
                cap: u128::MAX,
            });
            table[r][0] = step(prev[0].checked_add(o.checked_mul(prev[2]).unwrap_or(u128::MAX)))?;
            table[r][1] = step(prev[1].checked_add(o.checked_mul(prev[2]).unwrap_or(u128::MAX)))?;
            table[r][2] = step(
                prev[0]
                    .checked_add(prev[1])
                    .and_then(|s| s.checked_add(o2.checked_mul(prev[2]).unwrap_or(u128::MAX))),
            )?;
        }
        Ok(CyclicWordSpace { k, l, table })
    }

    fn cls(letter: Letter, first: Letter) -> usize {
        if letter == first {
            0
        } else if letter == first.inverse() {
            1
        } else {
            2
        }
    }

    pub fn total(&self) -> u128 {
        2 * self.k as u128 * self.table[self.l - 1][0]
    }

    pub fn unrank(&self, rank: u128) -> Result<Word> {
        if rank >= self.total() {
            return Err(Error::Parameter(format!(
                "rank {rank} out of range {}",
                self.total()
            )));
        }
        let per_first = self.table[self.l - 1][0];
        let first = Letter::from_index((rank / per_first) as usize);
        let mut rem = rank % per_first;
        let mut letters = vec![first];
        let mut cur = first;
        for pos in 1..self.l {
            let left = self.l - 1 - pos;
            for i in 0..2 * self.k {
                let cand = Letter::from_index(i);
                if cand == cur.inverse() {
                    continue;
                }
                let block = self.table[left][Self::cls(cand, first)];
                if rem >= block {
                    rem -= block;
                } else {
                    letters.push(cand);
                    cur = cand;
                    break;
                }
            }
        }
        Ok(Word(letters))
    }

    pub fn rank(&self, w: &Word) -> Result<u128> {
        if w.len() != self.l || !w.is_cyclically_reduced() {
            return Err(Error::NotReduced);
        }
        let first = w.0[0];
        let mut r = first.index() as u128 * self.table[self.l - 1][0];
        let mut cur = first;
        for pos in 1..self.l {
            let left = self.l - 1 - pos;
            for i in 0..2 * self.k {
                let cand = Letter::from_index(i);
                if cand == cur.inverse() {
                    continue;
                }
                if cand == w.0[pos] {
                    break;
                }
                r += self.table[left][Self::cls(cand, first)];
            }
            cur = w.0[pos];
        }
        Ok(r)
    }
}

/// Count of reduced words of length n+1 sharing a fixed first letter, per
/// the odd/even closed form.
pub fn reduced_word_count_qn(k: usize, n: usize) -> u128 {
    let b = 2 * k as u128 - 1;
    let pow = b.pow(n as u32 + 1);
    if n % 2 == 1 {
        (pow - 1) / (2 * k as u128)
    } else {
        (pow - b) / (2 * k as u128)
    }
}

/// Number of reduced words of length n+2 with prescribed first and last
/// letters; always q_n or q_n + 1.
pub fn count_completions(k: usize, a: Letter, b: Letter, n: usize) -> u128 {
    let o = 2 * k as u128 - 2;
    let o2 = (2 * k as u128).saturating_sub(3);
    // Columns: running letter equals b, equals b inverse, other.
    let mut row = [1u128, 0, 0];
    for _ in 0..n + 1 {
        row = [
            row[0] + o * row[2],
            row[1] + o * row[2],
            row[0] + row[1] + o2 * row[2],
        ];
    }
    let cls = if a == b {
        0
    } else if a == b.inverse() {
        1
    } else {
        2
    };
    row[cls]
}

/// Relator selection discipline for the samplers.
#[derive(Debug, Clone, Copy)]
pub enum SampleMode {
    /// Independent inclusion of every word with this probability.
    Binomial(f64),
    /// Uniform subset of exactly this many distinct words.
    Density(u64),
}

/// Density-model relator count for length-3 presentations,
/// round-half-to-even of (2m-1)^{3d}.
pub fn density_count_triangular(m: usize, d: f64) -> u64 {
    ((2 * m - 1) as f64).powf(3.0 * d).round_ties_even() as u64
}

/// Density-model relator count for length-l presentations,
/// round-half-to-even of (2k-1)^{dl}.
pub fn density_count_gromov(k: usize, l: usize, d: f64) -> u64 {
    ((2 * k - 1) as f64).powf(d * l as f64).round_ties_even() as u64
}

/// Ranks selected by a Bernoulli stream, generated by geometric jumps so
/// only included ranks cost work.
fn binomial_ranks<R: Rng>(total: u128, rho: f64, rng: &mut R) -> Result<Vec<u128>> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Parameter(format!(
            "inclusion probability must lie in [0,1], got {rho}"
        )));
    }
    let mut out = Vec::new();
    if rho == 0.0 {
        return Ok(out);
    }
    if rho == 1.0 {
        if total > 50_000_000 {
            return Err(Error::EnumerationTooLarge {
                estimate: total,
                cap: 50_000_000,
            });
        }
        return Ok((0..total).collect());
    }
    let log1m = (-rho).ln_1p();
    let mut pos: u128 = 0;
    loop {
        let u = 1.0 - rng.gen::<f64>();
        let jump = (u.ln() / log1m).floor();
        if !jump.is_finite() || jump >= total as f64 {
            break;
        }
        pos = pos.saturating_add(jump as u128);
        if pos >= total {
            break;
        }
        out.push(pos);
        pos += 1;
        if pos >= total {
            break;
        }
    }
    Ok(out)
}

/// Uniform distinct ranks without replacement, in ascending order.
fn uniform_distinct_ranks<R: Rng>(total: u128, count: u64, rng: &mut R) -> Result<Vec<u128>> {
    if count as u128 > total {
        return Err(Error::Parameter(format!(
            "requested {count} of only {total} words"
        )));
    }
    if total > u64::MAX as u128 {
        return Err(Error::EnumerationTooLarge {
            estimate: total,
            cap: u64::MAX as u128,
        });
    }
    let total = total as u64;
    // Floyd's sampling: each step adds exactly one new rank, uniformly.
    let mut chosen: HashSet<u64> = HashSet::with_capacity(count as usize);
    for j in (total - count)..total {
        let t = rng.gen_range(0..=j);
        if !chosen.insert(t) {
            chosen.insert(j);
        }
    }
    let mut ranks: Vec<u128> = chosen.into_iter().map(u128::from).collect();
    ranks.sort_unstable();
    Ok(ranks)
}

/// Random length-3 presentation over m generators.
pub fn sample_triangular(m: usize, mode: SampleMode, seed: &RngSeed) -> Result<Presentation> {
    let space = TriangularWordSpace::new(m)?;
    let mut rng = seed.rng();
    let ranks = match mode {
        SampleMode::Binomial(rho) => binomial_ranks(space.total(), rho, &mut rng)?,
        SampleMode::Density(count) => uniform_distinct_ranks(space.total(), count, &mut rng)?,
    };
    let relators = ranks
        .into_iter()
        .map(|r| space.unrank(r))
        .collect::<Result<Vec<_>>>()?;
    Presentation::new(m, relators, PresentationKind::Triangular)
}

/// Random length-l presentation over k generators.
pub fn sample_gromov(k: usize, l: usize, mode: SampleMode, seed: &RngSeed) -> Result<Presentation> {
    let space = CyclicWordSpace::new(k, l)?;
    let mut rng = seed.rng();
    let ranks = match mode {
        SampleMode::Binomial(rho) => binomial_ranks(space.total(), rho, &mut rng)?,
        SampleMode::Density(count) => uniform_distinct_ranks(space.total(), count, &mut rng)?,
    };
    let relators = ranks
        .into_iter()
        .map(|r| space.unrank(r))
        .collect::<Result<Vec<_>>>()?;
    Presentation::new(k, relators, PresentationKind::Gromov { l })
}

/// Rank of a reduced word among all reduced words of its length, in
/// lexicographic order.
fn rank_reduced(k: usize, w: &[Letter]) -> u64 {
    let b = 2 * k as u64 - 1;
    let n = w.len();
    let mut r = w[0].index() as u64 * b.pow(n as u32 - 1);
    for i in 1..n {
        let forbidden = w[i - 1].inverse().index();
        let idx = w[i].index();
        let pos = if idx > forbidden { idx - 1 } else { idx } as u64;
        r += pos * b.pow((n - 1 - i) as u32);
    }
    r
}

fn unrank_reduced(k: usize, n: usize, mut r: u64) -> Vec<Letter> {
    let b = 2 * k as u64 - 1;
    let mut w = Vec::with_capacity(n);
    let first = (r / b.pow(n as u32 - 1)) as usize;
    w.push(Letter::from_index(first));
    r %= b.pow(n as u32 - 1);
    for i in 1..n {
        let block = b.pow((n - 1 - i) as u32);
        let pos = (r / block) as usize;
        r %= block;
        let forbidden = w[i - 1].inverse().index();
        let idx = if pos >= forbidden { pos + 1 } else { pos };
        w.push(Letter::from_index(idx));
    }
    w
}

/// A length-l presentation rewritten over generators indexing length-l/3
/// blocks.
#[derive(Debug, Clone)]
pub struct GromovLift {
    /// The rewritten presentation: one length-3 relator per input relator.
    pub lifted: Presentation,
    /// Block word of each lifted generator; the image of an inverted letter
    /// is the inverse word.
    pub phi: Vec<Word>,
    /// Initial-letter class of each symmetrized lifted generator, indexed
    /// like link vertices (2g for the plain letter, 2g+1 for its inverse);
    /// values are letter indices of the base alphabet.
    pub parts: Vec<usize>,
    /// Common size of each of the 2k parts.
    pub part_size: u64,
}

impl GromovLift {
    /// Image of an arbitrary lifted letter.
    pub fn image(&self, letter: Letter) -> Word {
        if letter.inverted {
            self.phi[letter.gen].inverse()
        } else {
            self.phi[letter.gen].clone()
        }
    }
}

const LIFT_MAX_BLOCK_WORDS: u64 = 1_000_000;

/// Splits every relator of a length-l presentation (3 | l) into three
/// blocks of length l/3 and re-expresses it over one generator per
/// inverse-pair of reduced block words, the lexicographically smaller word
/// serving as the plain generator.
pub fn gromov_lift(p: &Presentation) -> Result<GromovLift> {
    let l = match p.kind {
        PresentationKind::Gromov { l } => l,
        PresentationKind::Triangular => 3,
    };
    if l % 3 != 0 {
        return Err(Error::Parameter(format!(
            "relator length {l} is not divisible by 3"
        )));
    }
    let n = l / 3;
    let k = p.generators;
    let b = 2 * k as u64 - 1;
    let word_count = 2 * k as u64 * b.pow(n as u32 - 1);
    if word_count > LIFT_MAX_BLOCK_WORDS {
        return Err(Error::EnumerationTooLarge {
            estimate: word_count as u128,
            cap: LIFT_MAX_BLOCK_WORDS as u128,
        });
    }
    // Walk block words in rank order; each inverse-pair is claimed by its
    // smaller member, which fixes a deterministic generator numbering.
    let mut assign: Vec<Option<(usize, bool)>> = vec![None; word_count as usize];
    let mut phi = Vec::new();
    for r in 0..word_count {
        if assign[r as usize].is_some() {
            continue;
        }
        let w = Word(unrank_reduced(k, n, r));
        let winv = w.inverse();
        let rinv = rank_reduced(k, &winv.0);
        let g = phi.len();
        assign[r as usize] = Some((g, false));
        assign[rinv as usize] = Some((g, true));
        phi.push(w);
    }
    let mut relators = Vec::with_capacity(p.relators.len());
    for w in &p.relators {
        let mut letters = Vec::with_capacity(3);
        for blk in 0..3 {
            let r = rank_reduced(k, &w.0[blk * n..(blk + 1) * n]);
            let (g, inverted) = assign[r as usize].expect("every rank was assigned");
            letters.push(Letter::new(g, inverted));
        }
        relators.push(Word(letters));
    }
    let lifted = Presentation::new(phi.len(), relators, PresentationKind::Triangular)?;
    let mut parts = Vec::with_capacity(2 * phi.len());
    for w in &phi {
        parts.push(w.0[0].index());
        parts.push(w.0[n - 1].inverse().index());
    }
    Ok(GromovLift {
        lifted,
        phi,
        parts,
        part_size: b.pow(n as u32 - 1),
    })
}

/// Text form: header "m <count> kind <triangular|gromov:l>", then one
/// relator per line of whitespace-separated tokens g<i> (generator i) and
/// G<i> (its inverse), indices zero-based. '#' starts a comment.
pub fn render_presentation(p: &Presentation) -> String {
    let kind = match p.kind {
        PresentationKind::Triangular => "triangular".to_string(),
        PresentationKind::Gromov { l } => format!("gromov:{l}"),
    };
    let mut out = format!("m {} kind {}\n", p.generators, kind);
    for w in &p.relators {
        let toks: Vec<String> = w
            .letters()
            .iter()
            .map(|l| format!("{}{}", if l.inverted { 'G' } else { 'g' }, l.gen))
            .collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "empty input".into(),
    })?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "m" || parts[2] != "kind" {
        return Err(Error::Parse {
            line: ln,
            msg: format!("expected 'm <count> kind <kind>', got '{header}'"),
        });
    }
    let generators: usize = parts[1].parse().map_err(|_| Error::Parse {
        line: ln,
        msg: format!("bad generator count '{}'", parts[1]),
    })?;
    let kind = if parts[3] == "triangular" {
        PresentationKind::Triangular
    } else if let Some(ls) = parts[3].strip_prefix("gromov:") {
        let l: usize = ls.parse().map_err(|_| Error::Parse {
            line: ln,
            msg: format!("bad relator length '{ls}'"),
        })?;
        PresentationKind::Gromov { l }
    } else {
        return Err(Error::Parse {
            line: ln,
            msg: format!("unknown kind '{}'", parts[3]),
        });
    };
    let mut relators = Vec::new();
    for (ln, line) in lines {
        let mut letters = Vec::new();
        for tok in line.split_whitespace() {
            let (inverted, rest) = match tok.chars().next() {
                Some('g') => (false, &tok[1..]),
                Some('G') => (true, &tok[1..]),
                _ => {
                    return Err(Error::Parse {
                        line: ln,
                        msg: format!("bad token '{tok}'"),
                    })
                }
            };
            let gen: usize = rest.parse().map_err(|_| Error::Parse {
                line: ln,
                msg: format!("bad token '{tok}'"),
            })?;
            letters.push(Letter::new(gen, inverted));
        }
        relators.push(Word(letters));
    }
    Presentation::new(generators, relators, kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letter_order_and_inverse() {
        for i in 0..8 {
            let l = Letter::from_index(i);
            assert_eq!(l.index(), i);
            assert_eq!(l.inverse().inverse(), l);
            assert_ne!(l.inverse(), l);
        }
        assert!(Letter::new(0, false) < Letter::new(0, true));
        assert!(Letter::new(0, true) < Letter::new(1, false));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_cyclically_reduced(1, 3).unwrap().len(), 2);
        assert_eq!(enumerate_cyclically_reduced(3, 1).unwrap().len(), 6);
        assert_eq!(enumerate_cyclically_reduced(2, 2).unwrap().len(), 12);
        // Independent brute force over all 4^3 raw triples with the two
        // adjacency filters applied directly.
        let mut brute = 0;
        for a in 0..4u32 {
            for b in 0..4u32 {
                for c in 0..4u32 {
                    let inv = |x: u32| x ^ 1;
                    if b != inv(a) && c != inv(b) && a != inv(c) {
                        brute += 1;
                    }
                }
            }
        }
        let listed = enumerate_cyclically_reduced(2, 3).unwrap();
        assert_eq!(listed.len(), brute);
        assert_eq!(listed.len(), 28);
        for w in &listed {
            assert!(w.is_cyclically_reduced());
        }
        assert!(enumerate_cyclically_reduced(2, 0).is_err());
        assert!(enumerate_cyclically_reduced(2, 4).is_err());
    }

    #[test]
    fn triangular_space_is_the_enumeration() {
        let space = TriangularWordSpace::new(2).unwrap();
        let listed = enumerate_cyclically_reduced(2, 3).unwrap();
        assert_eq!(space.total(), listed.len() as u128);
        for (i, w) in listed.iter().enumerate() {
            assert_eq!(&space.unrank(i as u128).unwrap(), w);
            assert_eq!(space.rank(w).unwrap(), i as u128);
        }
        assert!(space.unrank(space.total()).is_err());
    }

    #[test]
    fn triangular_space_large_m() {
        let space = TriangularWordSpace::new(300).unwrap();
        assert_eq!(space.total(), 600u128 * (599 + 598 * 598));
        for r in [0u128, 1, 599, space.total() - 1, space.total() / 2] {
            let w = space.unrank(r).unwrap();
            assert!(w.is_cyclically_reduced());
            assert_eq!(space.rank(&w).unwrap(), r);
        }
    }

    #[test]
    fn cyclic_space_total_matches_closed_form() {
        for k in 1..=3usize {
            for l in 3..=8usize {
                let space = CyclicWordSpace::new(k, l).unwrap();
                let b = (2 * k as u128) - 1;
                let expect = if l % 2 == 0 {
                    b.pow(l as u32) + b
                } else {
                    b.pow(l as u32) + 1
                };
                assert_eq!(space.total(), expect, "k={k} l={l}");
            }
        }
    }

    #[test]
    fn cyclic_space_unrank_is_the_enumeration() {
        let space = CyclicWordSpace::new(2, 6).unwrap();
        // Independent recursive enumeration with the same two filters.
        let mut brute = Vec::new();
        let mut cur: Vec<Letter> = Vec::new();
        fn rec(cur: &mut Vec<Letter>, brute: &mut Vec<Word>) {
            if cur.len() == 6 {
                let w = Word(cur.clone());
                if w.is_cyclically_reduced() {
                    brute.push(w);
                }
                return;
            }
            for i in 0..4 {
                cur.push(Letter::from_index(i));
                rec(cur, brute);
                cur.pop();
            }
        }
        rec(&mut cur, &mut brute);
        assert_eq!(space.total(), brute.len() as u128);
        assert_eq!(space.total(), 732);
        for (i, w) in brute.iter().enumerate() {
            assert_eq!(&space.unrank(i as u128).unwrap(), w);
            assert_eq!(space.rank(w).unwrap(), i as u128);
        }
    }

    #[test]
    fn qn_formula_examples_and_bounds() {
        assert_eq!(reduced_word_count_qn(2, 3), 20);
        assert_eq!(reduced_word_count_qn(2, 2), 6);
        for k in 2..=3usize {
            for n in 2..=6usize {
                let q = reduced_word_count_qn(k, n);
                let b = (2 * k as u128) - 1;
                assert!(2 * q >= b.pow(n as u32));
                assert!(q <= b.pow(n as u32));
            }
        }
    }

    #[test]
    fn completion_counts_match_enumeration() {
        for k in 2..=3usize {
            for n in 2..=3usize {
                let q = reduced_word_count_qn(k, n);
                let letters: Vec<Letter> = (0..2 * k).map(Letter::from_index).collect();
                for &a in &letters {
                    for &b in &letters {
                        let mut stack = vec![vec![a]];
                        let mut count = 0u128;
                        while let Some(w) = stack.pop() {
                            if w.len() == n + 2 {
                                if *w.last().unwrap() == b {
                                    count += 1;
                                }
                                continue;
                            }
                            for &cand in &letters {
                                if cand == w.last().unwrap().inverse() {
                                    continue;
                                }
                                let mut next = w.clone();
                                next.push(cand);
                                stack.push(next);
                            }
                        }
                        assert!(
                            count == q || count == q + 1,
                            "k={k} n={n} a={:?} b={:?}: {count} vs q={q}",
                            a,
                            b
                        );
                        assert_eq!(count, count_completions(k, a, b, n));
                    }
                }
            }
        }
    }

    #[test]
    fn binomial_sampling_extremes() {
        let p = sample_triangular(2, SampleMode::Binomial(0.0), &RngSeed::new(1)).unwrap();
        assert!(p.relators.is_empty());
        let p = sample_triangular(2, SampleMode::Binomial(1.0), &RngSeed::new(1)).unwrap();
        assert_eq!(p.relators.len(), 28);
        assert!(sample_triangular(2, SampleMode::Binomial(1.5), &RngSeed::new(1)).is_err());
    }

    #[test]
    fn binomial_sampling_reproducible_subset() {
        let a = sample_triangular(2, SampleMode::Binomial(0.5), &RngSeed::new(7)).unwrap();
        let b = sample_triangular(2, SampleMode::Binomial(0.5), &RngSeed::new(7)).unwrap();
        assert_eq!(a, b);
        assert!((7..=21).contains(&a.relators.len()), "{}", a.relators.len());
        let all: HashSet<Word> = enumerate_cyclically_reduced(2, 3).unwrap().into_iter().collect();
        for w in &a.relators {
            assert!(all.contains(w));
        }
    }

    #[test]
    fn binomial_sampling_mean() {
        // Inclusion probability 1e-3 over 59320 words: mean 59.3 per seed,
        // so a 30-seed average should land within a few standard errors.
        let mut total = 0usize;
        for s in 0..30 {
            let p =
                sample_triangular(20, SampleMode::Binomial(1e-3), &RngSeed::new(100 + s)).unwrap();
            total += p.relators.len();
        }
        let mean = total as f64 / 30.0;
        assert!((52.0..=67.0).contains(&mean), "mean {mean}");
    }

    #[test]
    fn density_sampling() {
        let p = sample_triangular(2, SampleMode::Density(5), &RngSeed::new(2)).unwrap();
        assert_eq!(p.relators.len(), 5);
        let set: HashSet<&Word> = p.relators.iter().collect();
        assert_eq!(set.len(), 5);
        let p2 = sample_triangular(2, SampleMode::Density(5), &RngSeed::new(2)).unwrap();
        assert_eq!(p, p2);
        assert!(sample_triangular(2, SampleMode::Density(29), &RngSeed::new(2)).is_err());
        assert_eq!(density_count_triangular(60, 0.4), 119f64.powf(1.2).round_ties_even() as u64);
    }

    #[test]
    fn gromov_sampling() {
        let p = sample_gromov(2, 6, SampleMode::Binomial(1.0), &RngSeed::new(3)).unwrap();
        assert_eq!(p.relators.len(), 732);
        for w in &p.relators {
            assert_eq!(w.len(), 6);
            assert!(w.is_cyclically_reduced());
        }
        assert_eq!(density_count_gromov(2, 6, 0.4), 14);
        let p = sample_gromov(2, 6, SampleMode::Density(14), &RngSeed::new(4)).unwrap();
        assert_eq!(p.relators.len(), 14);
    }

    #[test]
    fn reduced_rank_roundtrip() {
        for n in 1..=4usize {
            let k = 2;
            let count = 2 * k as u64 * (2 * k as u64 - 1).pow(n as u32 - 1);
            for r in 0..count {
                let w = unrank_reduced(k, n, r);
                assert_eq!(w.len(), n);
                assert!(Word(w.clone()).is_reduced());
                assert_eq!(rank_reduced(k, &w), r);
            }
        }
    }

    #[test]
    fn lift_identity_at_length_three() {
        let p = sample_triangular(2, SampleMode::Density(6), &RngSeed::new(5)).unwrap();
        let lift = gromov_lift(&p).unwrap();
        assert_eq!(lift.lifted.generators, 2);
        assert_eq!(lift.lifted.relators, p.relators);
        for (g, w) in lift.phi.iter().enumerate() {
            assert_eq!(w.letters(), &[Letter::new(g, false)]);
        }
    }

    #[test]
    fn lift_blocks_concatenate_back() {
        for l in [6usize, 9] {
            let rho = 0.02;
            let p = sample_gromov(2, l, SampleMode::Binomial(rho), &RngSeed::new(6)).unwrap();
            assert!(!p.relators.is_empty());
            let lift = gromov_lift(&p).unwrap();
            let n = l / 3;
            let b = 3u64.pow(n as u32 - 1);
            assert_eq!(lift.lifted.generators as u64, 2 * b);
            assert_eq!(lift.part_size, b);
            // Parts partition all symmetrized generators into 2k classes of
            // equal size.
            let mut sizes = vec![0u64; 4];
            for &c in &lift.parts {
                sizes[c] += 1;
            }
            assert_eq!(lift.parts.len(), 2 * lift.lifted.generators);
            assert!(sizes.iter().all(|&s| s == b));
            for (orig, lifted) in p.relators.iter().zip(&lift.lifted.relators) {
                assert_eq!(lifted.len(), 3);
                assert!(lifted.is_cyclically_reduced());
                let back = lift
                    .image(lifted.0[0])
                    .concat(&lift.image(lifted.0[1]))
                    .concat(&lift.image(lifted.0[2]));
                assert_eq!(&back, orig);
            }
        }
    }

    #[test]
    fn lift_orbit_representatives() {
        let p = sample_gromov(2, 6, SampleMode::Binomial(0.05), &RngSeed::new(8)).unwrap();
        let lift = gromov_lift(&p).unwrap();
        // Exactly one of each inverse pair appears among the images, and
        // the images are distinct.
        let images: HashSet<&Word> = lift.phi.iter().collect();
        assert_eq!(images.len(), lift.phi.len());
        for w in &lift.phi {
            assert!(*w < w.inverse());
            assert!(!images.contains(&w.inverse()));
        }
    }

    #[test]
    fn lift_rejects_bad_lengths() {
        let p = sample_gromov(2, 7, SampleMode::Density(3), &RngSeed::new(9)).unwrap();
        assert!(gromov_lift(&p).is_err());
    }

    #[test]
    fn presentation_validation() {
        let short = Word(vec![Letter::new(0, false)]);
        assert!(matches!(
            Presentation::new(1, vec![short], PresentationKind::Triangular),
            Err(Error::RelatorLength { .. })
        ));
        let unreduced = Word(vec![
            Letter::new(0, false),
            Letter::new(0, true),
            Letter::new(1, false),
        ]);
        assert!(matches!(
            Presentation::new(2, vec![unreduced], PresentationKind::Triangular),
            Err(Error::NotReduced)
        ));
        let foreign = Word(vec![
            Letter::new(0, false),
            Letter::new(3, false),
            Letter::new(1, false),
        ]);
        assert!(Presentation::new(2, vec![foreign], PresentationKind::Triangular).is_err());
    }

    #[test]
    fn format_roundtrip() {
        let p = sample_triangular(3, SampleMode::Density(7), &RngSeed::new(10)).unwrap();
        let text = render_presentation(&p);
        let q = parse_presentation(&text).unwrap();
        assert_eq!(p, q);
        let g = sample_gromov(2, 6, SampleMode::Density(9), &RngSeed::new(11)).unwrap();
        let q = parse_presentation(&render_presentation(&g)).unwrap();
        assert_eq!(g, q);
        let with_comment = "m 1 kind triangular # header\n g0 g0 g0 # body\n";
        let q = parse_presentation(with_comment).unwrap();
        assert_eq!(q.relators.len(), 1);
        assert!(parse_presentation("m x kind triangular\n").is_err());
        assert!(parse_presentation("m 2 kind gromov:bad\n").is_err());
        assert!(parse_presentation("m 2 kind triangular\nz0 g1 g1\n").is_err());
    }
}
