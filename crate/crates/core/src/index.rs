//! Run-length FM index over a finished BWT, answering counting queries by
//! backward search.
//!
//! The BWT is stored as run heads plus run lengths. Rank queries combine the
//! cumulative length of a character's earlier runs with the overlap into the
//! current run; at this scale plain per-character tables stand in for the
//! wavelet-tree encoding without changing the interface.

use crate::error::{Error, Result};
use crate::pfpbwt::BwtOutput;
use crate::MIN_INPUT_BYTE;

/// Run-length encoded BWT with rank support.
#[derive(Debug, Clone)]
pub struct RleBwt {
    /// One byte per maximal run; adjacent heads differ.
    run_heads: Vec<u8>,
    run_lens: Vec<u64>,
    /// run_starts[k] is the BWT position where run k begins; the extra final
    /// entry is the total length.
    run_starts: Vec<u64>,
    /// Per byte value: indices of its runs and cumulative lengths before each.
    char_runs: Vec<CharRuns>,
}

#[derive(Debug, Clone, Default)]
struct CharRuns {
    run_idx: Vec<u32>,
    /// cum_len[i] = total length of this character's runs preceding run_idx[i];
    /// one extra final entry holds the grand total.
    cum_len: Vec<u64>,
}

impl RleBwt {
    fn build(bwt: &[u8]) -> Self {
        let mut run_heads = Vec::new();
        let mut run_lens: Vec<u64> = Vec::new();
        for &b in bwt {
            match run_heads.last() {
                Some(&h) if h == b => *run_lens.last_mut().unwrap() += 1,
                _ => {
                    run_heads.push(b);
                    run_lens.push(1);
                }
            }
        }
        let mut run_starts = Vec::with_capacity(run_lens.len() + 1);
        let mut sum = 0u64;
        for &l in &run_lens {
            run_starts.push(sum);
            sum += l;
        }
        run_starts.push(sum);

        let mut char_runs = vec![CharRuns::default(); 256];
        for (k, (&h, &l)) in run_heads.iter().zip(&run_lens).enumerate() {
            let cr = &mut char_runs[h as usize];
            let before = cr.cum_len.last().copied().unwrap_or(0);
            cr.run_idx.push(k as u32);
            if cr.cum_len.is_empty() {
                cr.cum_len.push(0);
            }
            cr.cum_len.push(before + l);
        }
        // normalize: cum_len[i] pairs with run_idx[i]; last entry is the total
        for cr in &mut char_runs {
            debug_assert!(cr.cum_len.len() == cr.run_idx.len() + 1 || cr.run_idx.is_empty());
        }

        RleBwt { run_heads, run_lens, run_starts, char_runs }
    }

    pub fn num_runs(&self) -> usize {
        self.run_heads.len()
    }

    pub fn run_heads(&self) -> &[u8] {
        &self.run_heads
    }

    pub fn run_lens(&self) -> &[u64] {
        &self.run_lens
    }

    /// Index of the run containing BWT position `i`.
    pub fn pos_to_run(&self, i: usize) -> usize {
        self.run_starts.partition_point(|&s| s <= i as u64) - 1
    }

    /// First BWT position of run `k`.
    pub fn run_to_pos(&self, k: usize) -> usize {
        self.run_starts[k] as usize
    }

    /// Occurrences of `c` in bwt[0, i).
    fn rank(&self, c: u8, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        let k = self.pos_to_run(i - 1);
        let cr = &self.char_runs[c as usize];
        let pos = cr.run_idx.partition_point(|&r| (r as usize) < k);
        let mut count = if cr.run_idx.is_empty() { 0 } else { cr.cum_len[pos] as usize };
        if self.run_heads[k] == c {
            count += i - self.run_starts[k] as usize;
        }
        count
    }

    fn byte_at(&self, i: usize) -> u8 {
        self.run_heads[self.pos_to_run(i)]
    }
}

/// A recorded suffix-array value at a run boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SaSample {
    pub row: usize,
    pub sa: usize,
}

/// Counting-only run-length FM index: cumulative character counts, the
/// run-length encoded BWT, and optionally suffix-array samples at run
/// boundaries.
#[derive(Debug, Clone)]
pub struct RlfmIndex {
    /// c_table[c] = number of BWT characters strictly smaller than byte c;
    /// entry 256 is the total length.
    c_table: Vec<u64>,
    rle: RleBwt,
    /// Length of the text without terminator.
    n: usize,
    samples: Option<Vec<SaSample>>,
}

/// Builds the index: character counts for the C array and a single
/// left-to-right run scan. No suffix-array samples are attached.
pub fn build_rlfm(bwt: &BwtOutput) -> RlfmIndex {
    let mut counts = [0u64; 256];
    for &b in &bwt.bytes {
        counts[b as usize] += 1;
    }
    let mut c_table = Vec::with_capacity(257);
    let mut sum = 0u64;
    for &cnt in counts.iter() {
        c_table.push(sum);
        sum += cnt;
    }
    c_table.push(sum);

    RlfmIndex { c_table, rle: RleBwt::build(&bwt.bytes), n: bwt.bytes.len() - 1, samples: None }
}

impl RlfmIndex {
    /// Text length without the terminator; the BWT holds `n + 1` characters.
    pub fn text_len(&self) -> usize {
        self.n
    }

    pub fn num_runs(&self) -> usize {
        self.rle.num_runs()
    }

    pub fn rle(&self) -> &RleBwt {
        &self.rle
    }

    /// Number of BWT characters strictly smaller than `c`.
    pub fn c_of(&self, c: u8) -> usize {
        self.c_table[c as usize] as usize
    }

    /// Distinct byte values present, ascending.
    pub fn alphabet(&self) -> Vec<u8> {
        (0u16..256)
            .filter(|&c| self.c_table[c as usize + 1] > self.c_table[c as usize])
            .map(|c| c as u8)
            .collect()
    }

    /// Occurrences of `c` in bwt[0, i).
    pub fn rank(&self, c: u8, i: usize) -> Result<usize> {
        if i > self.n + 1 {
            return Err(Error::PositionOutOfRange { position: i, limit: self.n + 1 });
        }
        Ok(self.rle.rank(c, i))
    }

    /// Maps a BWT row to the row of the suffix one text position earlier.
    pub fn lf(&self, i: usize) -> Result<usize> {
        if i > self.n {
            return Err(Error::PositionOutOfRange { position: i, limit: self.n });
        }
        let c = self.rle.byte_at(i);
        Ok(self.c_of(c) + self.rle.rank(c, i))
    }

    /// Occurrences of `pattern` in the indexed text, by backward search.
    /// Absent patterns (including any with reserved bytes) count zero.
    pub fn count(&self, pattern: &[u8]) -> usize {
        if pattern.is_empty() || pattern.iter().any(|&b| b < MIN_INPUT_BYTE) {
            return 0;
        }
        let mut lo = 0usize;
        let mut hi = self.n + 1;
        for &c in pattern.iter().rev() {
            lo = self.c_of(c) + self.rle.rank(c, lo);
            hi = self.c_of(c) + self.rle.rank(c, hi);
            if lo >= hi {
                return 0;
            }
        }
        hi - lo
    }

    pub fn samples(&self) -> Option<&[SaSample]> {
        self.samples.as_deref()
    }

    pub fn set_samples(&mut self, samples: Vec<SaSample>) {
        self.samples = Some(samples);
    }
}

/// Recovers suffix-array values at run boundaries by walking the BWT
/// backwards through LF steps, starting from the terminator's row. Step `k`
/// of the walk sits on the row whose suffix starts at `n - k`.
pub fn backstep_sa_sample(ix: &RlfmIndex, bwt: &BwtOutput) -> Result<Vec<SaSample>> {
    let total = ix.text_len() + 1;
    if bwt.bytes.len() != total {
        return Err(Error::MalformedParse(format!(
            "BWT length {} does not match index length {}",
            bwt.bytes.len(),
            total
        )));
    }
    let mut visited = vec![false; total];
    let mut samples = Vec::new();
    let mut row = 0usize;
    for k in 0..total {
        if visited[row] {
            return Err(Error::CycleError { steps: k });
        }
        visited[row] = true;
        let sa_value = ix.text_len() - k;
        let run = ix.rle.pos_to_run(row);
        let start = ix.rle.run_to_pos(run);
        let end = start + ix.rle.run_lens()[run] as usize - 1;
        if row == start || row == end {
            samples.push(SaSample { row, sa: sa_value });
        }
        // LF from the BWT bytes directly; the index supplies C and rank.
        let c = bwt.bytes[row];
        row = ix.c_of(c) + ix.rank(c, row)?;
    }
    samples.sort_by_key(|s| s.row);
    Ok(samples)
}
