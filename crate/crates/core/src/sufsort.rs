//! Suffix-array construction by induced sorting, plus the generalized
//! suffix/LCP arrays over a set of dictionary phrases.
//!
//! The generalized variant concatenates the phrases with a separator and
//! sorts every suffix of the result with the same induced sorter; callers
//! skip the suffixes that start at separators or are too short, and LCP
//! values are truncated so that separators never take part in a common
//! prefix.

use crate::error::{Error, Result};
use crate::{DICT_END, PHRASE_SEP};

const EMPTY: usize = usize::MAX;

/// Suffix array of a sequence over an integer alphabet whose last element is
/// the unique smallest. Linear time.
pub fn suffix_array(seq: &[u32]) -> Result<Vec<u32>> {
    let n = seq.len();
    if n == 0 {
        return Err(Error::BadTerminator);
    }
    let term = seq[n - 1];
    if seq[..n - 1].iter().any(|&v| v <= term) {
        return Err(Error::BadTerminator);
    }
    let s: Vec<usize> = seq.iter().map(|&v| v as usize).collect();
    let sigma = *s.iter().max().unwrap() + 1;
    let mut sa = vec![EMPTY; n];
    sais(&s, &mut sa, sigma);
    Ok(sa.into_iter().map(|v| v as u32).collect())
}

fn bucket_sizes(s: &[usize], sigma: usize) -> Vec<usize> {
    let mut sizes = vec![0usize; sigma];
    for &c in s {
        sizes[c] += 1;
    }
    sizes
}

fn bucket_heads(sizes: &[usize]) -> Vec<usize> {
    let mut heads = Vec::with_capacity(sizes.len());
    let mut sum = 0;
    for &sz in sizes {
        heads.push(sum);
        sum += sz;
    }
    heads
}

fn bucket_tails(sizes: &[usize]) -> Vec<usize> {
    let mut tails = Vec::with_capacity(sizes.len());
    let mut sum = 0;
    for &sz in sizes {
        sum += sz;
        tails.push(sum);
    }
    tails
}

/// One round of induced sorting: left-to-right pass fills L-type suffixes
/// from bucket heads, right-to-left pass fills S-type suffixes from tails.
fn induce(s: &[usize], sa: &mut [usize], sizes: &[usize], is_s: &[bool]) {
    let n = s.len();
    let mut heads = bucket_heads(sizes);
    for i in 0..n {
        let p = sa[i];
        if p != EMPTY && p > 0 && !is_s[p - 1] {
            let c = s[p - 1];
            sa[heads[c]] = p - 1;
            heads[c] += 1;
        }
    }
    let mut tails = bucket_tails(sizes);
    for i in (0..n).rev() {
        let p = sa[i];
        if p != EMPTY && p > 0 && is_s[p - 1] {
            let c = s[p - 1];
            tails[c] -= 1;
            sa[tails[c]] = p - 1;
        }
    }
}

fn sais(s: &[usize], sa: &mut [usize], sigma: usize) {
    let n = s.len();
    if n == 1 {
        sa[0] = 0;
        return;
    }

    let mut is_s = vec![false; n];
    is_s[n - 1] = true;
    for i in (0..n - 1).rev() {
        is_s[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && is_s[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && is_s[i] && !is_s[i - 1];

    let sizes = bucket_sizes(s, sigma);

    // Round 1: seed the LMS positions at their bucket tails and induce, which
    // leaves the LMS substrings in sorted order.
    sa.fill(EMPTY);
    let mut tails = bucket_tails(&sizes);
    for i in (1..n).rev() {
        if is_lms(i) {
            let c = s[i];
            tails[c] -= 1;
            sa[tails[c]] = i;
        }
    }
    induce(s, sa, &sizes, &is_s);

    // Compact the sorted LMS positions to the front of sa.
    let mut m = 0;
    for i in 0..n {
        let p = sa[i];
        if p != EMPTY && is_lms(p) {
            sa[m] = p;
            m += 1;
        }
    }

    // Length of each LMS substring (up to and including the next LMS
    // position); distinct LMS positions are >= 2 apart, so indexing by p/2
    // never clashes.
    let mut length_at = vec![0usize; n / 2 + 1];
    let mut prev_lms = None;
    for i in 1..n {
        if is_lms(i) {
            if let Some(q) = prev_lms {
                length_at[q / 2] = i - q + 1;
            }
            prev_lms = Some(i);
        }
    }
    if let Some(q) = prev_lms {
        length_at[q / 2] = n - q;
    }

    // Name the LMS substrings in sorted order; equal substrings share a name.
    let mut names = vec![EMPTY; n / 2 + 1];
    let mut name_count = 0usize;
    let mut prev: Option<usize> = None;
    for i in 0..m {
        let p = sa[i];
        let differs = match prev {
            None => true,
            Some(q) => {
                let (lp, lq) = (length_at[p / 2], length_at[q / 2]);
                lp != lq || s[p..p + lp] != s[q..q + lq]
            }
        };
        if differs {
            name_count += 1;
        }
        names[p / 2] = name_count - 1;
        prev = Some(p);
    }

    let lms_positions: Vec<usize> = (1..n).filter(|&i| is_lms(i)).collect();
    let mut lms_sorted: Vec<usize>;
    if name_count < m {
        // Names repeat: recurse on the reduced string to rank the LMS
        // suffixes. The reduced string ends with the terminator's name,
        // which is unique and smallest.
        let reduced: Vec<usize> = lms_positions.iter().map(|&i| names[i / 2]).collect();
        let mut sa1 = vec![EMPTY; m];
        sais(&reduced, &mut sa1, name_count);
        lms_sorted = sa1.into_iter().map(|r| lms_positions[r]).collect();
    } else {
        lms_sorted = sa[..m].to_vec();
    }

    // Round 2: seed the now fully sorted LMS suffixes and induce the rest.
    sa.fill(EMPTY);
    let mut tails = bucket_tails(&sizes);
    while let Some(p) = lms_sorted.pop() {
        let c = s[p];
        tails[c] -= 1;
        sa[tails[c]] = p;
    }
    induce(s, sa, &sizes, &is_s);
}

/// Suffix and LCP arrays over the concatenation of the dictionary phrases.
///
/// `concat` is every phrase followed by [`PHRASE_SEP`], with one [`DICT_END`]
/// terminator at the very end. Suffixes that start at a separator or the
/// terminator are flagged via [`GsaLcpResult::is_skippable`]; LCP values are
/// truncated at phrase ends so they only reflect the phrase suffixes
/// themselves.
#[derive(Debug, Clone)]
pub struct GsaLcpResult {
    pub concat: Vec<u8>,
    pub sa: Vec<u32>,
    pub lcp: Vec<u32>,
    /// Start offset of each phrase in `concat`, plus the terminator offset.
    phrase_starts: Vec<u32>,
}

impl GsaLcpResult {
    pub fn num_phrases(&self) -> usize {
        self.phrase_starts.len() - 1
    }

    /// True when the suffix at `pos` starts on a separator or the terminator.
    pub fn is_skippable(&self, pos: usize) -> bool {
        self.concat[pos] <= PHRASE_SEP
    }

    /// Phrase index and offset within the phrase for a concat position.
    pub fn locate(&self, pos: usize) -> (usize, usize) {
        let k = self.phrase_starts.partition_point(|&st| st as usize <= pos) - 1;
        (k, pos - self.phrase_starts[k] as usize)
    }

    /// Remaining length of the phrase suffix starting at `pos`; zero on
    /// separator and terminator positions.
    pub fn suffix_len(&self, pos: usize) -> usize {
        if self.is_skippable(pos) {
            return 0;
        }
        let k = self.phrase_starts.partition_point(|&st| st as usize <= pos) - 1;
        // The separator sits right before the next phrase start.
        (self.phrase_starts[k + 1] as usize - 1) - pos
    }
}

/// Sorts every suffix of every dictionary phrase. `dict` must be non-empty
/// and strictly sorted.
pub fn gsa_lcp(dict: &[Vec<u8>]) -> Result<GsaLcpResult> {
    if dict.is_empty() {
        return Err(Error::MalformedParse("dictionary is empty".into()));
    }
    for pair in dict.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::MalformedParse("dictionary not strictly sorted".into()));
        }
    }

    let total: usize = dict.iter().map(|d| d.len() + 1).sum::<usize>() + 1;
    let mut concat = Vec::with_capacity(total);
    let mut phrase_starts = Vec::with_capacity(dict.len() + 1);
    for d in dict {
        phrase_starts.push(concat.len() as u32);
        concat.extend_from_slice(d);
        concat.push(PHRASE_SEP);
    }
    phrase_starts.push(concat.len() as u32);
    concat.push(DICT_END);

    let widened: Vec<u32> = concat.iter().map(|&b| b as u32).collect();
    let sa = suffix_array(&widened)?;
    let mut lcp = kasai(&concat, &sa);

    // Distance from each position to the end of its phrase; separators and
    // the terminator get zero. LCP entries are clamped so comparisons stop
    // at phrase ends.
    let mut sufdist = vec![0u32; concat.len()];
    for (k, d) in dict.iter().enumerate() {
        let st = phrase_starts[k] as usize;
        for o in 0..d.len() {
            sufdist[st + o] = (d.len() - o) as u32;
        }
    }
    for i in 1..sa.len() {
        let cap = sufdist[sa[i] as usize].min(sufdist[sa[i - 1] as usize]);
        if lcp[i] > cap {
            lcp[i] = cap;
        }
    }

    Ok(GsaLcpResult { concat, sa, lcp, phrase_starts })
}

/// Plain LCP array by Kasai's algorithm: lcp[i] is the common-prefix length
/// of the suffixes at sa[i-1] and sa[i].
fn kasai(s: &[u8], sa: &[u32]) -> Vec<u32> {
    let n = s.len();
    let mut rank = vec![0u32; n];
    for (i, &p) in sa.iter().enumerate() {
        rank[p as usize] = i as u32;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for p in 0..n {
        let r = rank[p] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let q = sa[r - 1] as usize;
        while p + h < n && q + h < n && s[p + h] == s[q + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SENTINEL;

    fn brute_sa(seq: &[u32]) -> Vec<u32> {
        let mut sa: Vec<u32> = (0..seq.len() as u32).collect();
        sa.sort_by(|&a, &b| seq[a as usize..].cmp(&seq[b as usize..]));
        sa
    }

    #[test]
    fn tiny_examples() {
        // "aba$" as integers
        assert_eq!(suffix_array(&[1, 2, 1, 0]).unwrap(), vec![3, 2, 0, 1]);
        assert_eq!(suffix_array(&[0]).unwrap(), vec![0]);
        // the worked example's parse, ranks shifted +1 and terminated
        assert_eq!(
            suffix_array(&[1, 2, 4, 2, 5, 3, 0]).unwrap(),
            vec![6, 0, 1, 3, 5, 2, 4]
        );
    }

    #[test]
    fn rejects_bad_terminator() {
        assert_eq!(suffix_array(&[]), Err(Error::BadTerminator));
        assert_eq!(suffix_array(&[1, 0, 0]), Err(Error::BadTerminator));
        assert_eq!(suffix_array(&[0, 1, 0]), Err(Error::BadTerminator));
    }

    #[test]
    fn matches_brute_force_on_fixed_cases() {
        let cases: Vec<Vec<u32>> = vec![
            vec![5, 4, 3, 2, 1, 0],
            vec![1, 1, 1, 1, 0],
            vec![2, 1, 2, 1, 2, 1, 0],
            vec![7, 3, 7, 3, 7, 3, 1, 7, 3, 0],
            b"mississippi\0".iter().map(|&b| b as u32).collect(),
        ];
        for seq in cases {
            assert_eq!(suffix_array(&seq).unwrap(), brute_sa(&seq), "seq={seq:?}");
        }
    }

    #[test]
    fn matches_brute_force_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5a15);
        for case in 0..300 {
            let len = rng.gen_range(1..=if case % 10 == 0 { 2000 } else { 120 });
            let sigma = [2u32, 3, 4, 26, 1000, 65536][case % 6];
            let mut seq: Vec<u32> =
                (0..len).map(|_| rng.gen_range(1..=sigma)).collect();
            seq.push(0);
            assert_eq!(suffix_array(&seq).unwrap(), brute_sa(&seq), "case {case}");
        }
    }

    #[test]
    fn gsa_of_single_phrase() {
        let dict = vec![vec![SENTINEL, b'A', b'A', b'A', SENTINEL]];
        let g = gsa_lcp(&dict).unwrap();
        assert_eq!(g.num_phrases(), 1);
        assert_eq!(g.concat.len(), 7);
        // every non-skippable position belongs to phrase 0
        for pos in 0..5 {
            assert_eq!(g.locate(pos), (0, pos));
            assert_eq!(g.suffix_len(pos), 5 - pos);
        }
        assert!(g.is_skippable(5));
        assert!(g.is_skippable(6));
    }

    #[test]
    fn worked_example_suffix_ranks() {
        // Dictionary of the worked example; <s> marks sentinels.
        let s = SENTINEL;
        let dict: Vec<Vec<u8>> = vec![
            [&[s][..], b"GATTAC"].concat(),
            b"ACAT!".to_vec(),
            [b"AGATA".as_slice(), &[s, s]].concat(),
            b"T!GATAC".to_vec(),
            b"T!GATTAG".to_vec(),
        ];
        let g = gsa_lcp(&dict).unwrap();
        let w = 2;
        let mut kept: Vec<Vec<u8>> = Vec::new();
        for &p in &g.sa {
            let p = p as usize;
            if g.is_skippable(p) || g.suffix_len(p) <= w {
                continue;
            }
            kept.push(g.concat[p..p + g.suffix_len(p)].to_vec());
        }
        // 24 occurrences; TAC comes from two phrases and appears twice, in
        // adjacent entries
        assert_eq!(kept.len(), 24);
        kept.dedup();
        let expected: Vec<Vec<u8>> = vec![
            [&[s][..], b"GATTAC"].concat(),
            b"!GATAC".to_vec(),
            b"!GATTAG".to_vec(),
            [b"A".as_slice(), &[s, s]].concat(),
            b"ACAT!".to_vec(),
            [b"AGATA".as_slice(), &[s, s]].concat(),
            b"AT!".to_vec(),
            [b"ATA".as_slice(), &[s, s]].concat(),
            b"ATAC".to_vec(),
            b"ATTAC".to_vec(),
            b"ATTAG".to_vec(),
            b"CAT!".to_vec(),
            [b"GATA".as_slice(), &[s, s]].concat(),
            b"GATAC".to_vec(),
            b"GATTAC".to_vec(),
            b"GATTAG".to_vec(),
            b"T!GATAC".to_vec(),
            b"T!GATTAG".to_vec(),
            [b"TA".as_slice(), &[s, s]].concat(),
            b"TAC".to_vec(),
            b"TAG".to_vec(),
            b"TTAC".to_vec(),
            b"TTAG".to_vec(),
        ];
        assert_eq!(kept.len(), 23);
        assert_eq!(kept, expected);
    }

    #[test]
    fn lcp_agrees_with_direct_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x1c9);
        for _ in 0..50 {
            let m = rng.gen_range(1..6);
            let mut dict: Vec<Vec<u8>> = (0..m)
                .map(|_| {
                    let len = rng.gen_range(1..12);
                    (0..len).map(|_| b'a' + rng.gen_range(0..3)).collect()
                })
                .collect();
            dict.sort();
            dict.dedup();
            let g = gsa_lcp(&dict).unwrap();
            for i in 1..g.sa.len() {
                let (a, b) = (g.sa[i - 1] as usize, g.sa[i] as usize);
                let (la, lb) = (g.suffix_len(a), g.suffix_len(b));
                let direct = g.concat[a..a + la]
                    .iter()
                    .zip(&g.concat[b..b + lb])
                    .take_while(|(x, y)| x == y)
                    .count();
                assert_eq!(g.lcp[i] as usize, direct);
                assert!(g.lcp[i] as usize <= la.min(lb));
            }
        }
    }
}
