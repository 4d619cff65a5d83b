//! Reconstructs the BWT of the terminated text from dictionary and parse
//! alone, without touching the text.
//!
//! Two sorted structures drive the merge: the BWT of the parse, held as one
//! inverted list of positions per phrase, and the generalized suffix array of
//! the dictionary. Scanning the dictionary suffixes in order, each maximal
//! group of equal suffixes contributes a block of output characters. When all
//! of a group's characters are equal they are emitted in bulk; when a group
//! mixes preceding characters, or contains a whole phrase, the member phrases'
//! inverted lists are heap-merged and characters emitted in parse-BWT
//! position order, which is their text order among equal suffixes.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::parse::PfpResult;
use crate::sufsort::{suffix_array, GsaLcpResult};
use crate::SENTINEL;

/// BWT of the parse, inverted: for each phrase rank the increasing list of
/// parse-BWT positions holding that rank, plus the last-character array
/// permuted into parse-BWT order.
#[derive(Debug, Clone)]
pub struct ParseBwt {
    pub ilists: Vec<Vec<u32>>,
    /// wperm[j] is the last-character entry of the phrase preceding position
    /// j's suffix in the (cyclic) parse.
    pub wperm: Vec<u8>,
}

/// The finished transform: `text_len + 1` bytes over the input alphabet plus
/// exactly one sentinel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BwtOutput {
    pub bytes: Vec<u8>,
}

impl BwtOutput {
    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    /// Wraps raw bytes, checking the one-sentinel invariant.
    pub fn from_bytes(bytes: Vec<u8>) -> Result<Self> {
        let sentinels = bytes.iter().filter(|&&b| b == SENTINEL).count();
        if sentinels != 1 {
            return Err(Error::MalformedParse(format!(
                "BWT must contain exactly one sentinel, found {sentinels}"
            )));
        }
        Ok(Self { bytes })
    }
}

/// Builds the parse BWT. The suffix array is taken over the rank sequence
/// shifted by one with a zero terminator; the terminator row is dropped and
/// predecessors wrap cyclically, so the smallest suffix is preceded by the
/// final phrase.
pub fn bwt_of_parse(res: &PfpResult) -> Result<ParseBwt> {
    let z = res.parse.len();
    let mut shifted: Vec<u32> = Vec::with_capacity(z + 1);
    shifted.extend(res.parse.iter().map(|&r| r + 1));
    shifted.push(0);
    let sa = suffix_array(&shifted)?;

    let mut ilists: Vec<Vec<u32>> = res.freq.iter().map(|&f| Vec::with_capacity(f as usize)).collect();
    let mut wperm = Vec::with_capacity(z);
    for (j, &p) in sa[1..].iter().enumerate() {
        let p = p as usize;
        let rank = res.parse[(p + z - 1) % z];
        ilists[rank as usize].push(j as u32);
        wperm.push(res.lastw[(p + z + z - 2) % z]);
    }
    Ok(ParseBwt { ilists, wperm })
}

/// One member of a suffix group: a phrase and the offset where the shared
/// suffix starts. Offset zero means the suffix is the whole phrase.
#[derive(Debug, Clone, Copy)]
struct Member {
    phrase: u32,
    offset: u32,
}

/// Walks the generalized suffix array, skipping separator starts and
/// suffixes no longer than the window, and hands each maximal group of equal
/// suffixes to `emit`.
fn scan_groups<F>(res: &PfpResult, gsa: &GsaLcpResult, mut emit: F) -> Result<()>
where
    F: FnMut(&[Member]) -> Result<()>,
{
    let w = res.window;
    let mut group: Vec<Member> = Vec::new();
    let mut prev_kept_len = 0usize;
    for (i, &pos) in gsa.sa.iter().enumerate() {
        let pos = pos as usize;
        let len = gsa.suffix_len(pos);
        let kept = !gsa.is_skippable(pos) && len > w;
        // Equal suffixes are adjacent in the suffix array; a group continues
        // exactly while the pairwise LCP covers the whole suffix.
        let continues = kept
            && !group.is_empty()
            && prev_kept_len == len
            && gsa.lcp[i] as usize >= len;
        if !continues && !group.is_empty() {
            emit(&group)?;
            group.clear();
        }
        if kept {
            let (phrase, offset) = gsa.locate(pos);
            group.push(Member { phrase: phrase as u32, offset: offset as u32 });
            prev_kept_len = len;
        } else {
            prev_kept_len = 0;
        }
    }
    if !group.is_empty() {
        emit(&group)?;
    }
    Ok(())
}

/// Emits one group's characters into `out`, ordered by parse-BWT position.
fn emit_group(res: &PfpResult, pb: &ParseBwt, members: &[Member], out: &mut [u8]) {
    let single_char = members.iter().all(|m| m.offset > 0)
        && members
            .windows(2)
            .all(|p| preceding_byte(res, &p[0]) == preceding_byte(res, &p[1]));
    if single_char {
        out.fill(preceding_byte(res, &members[0]));
        return;
    }

    // Heap-merge the members' inverted lists; each popped parse-BWT position
    // contributes one character, from inside the phrase for proper suffixes
    // or from the permuted last-character array for whole phrases.
    let mut heap: BinaryHeap<Reverse<(u32, usize, usize)>> = BinaryHeap::new();
    for (m, member) in members.iter().enumerate() {
        let list = &pb.ilists[member.phrase as usize];
        if !list.is_empty() {
            heap.push(Reverse((list[0], m, 0)));
        }
    }
    let mut k = 0;
    while let Some(Reverse((pos, m, idx))) = heap.pop() {
        let member = &members[m];
        out[k] = if member.offset == 0 {
            pb.wperm[pos as usize]
        } else {
            preceding_byte(res, member)
        };
        k += 1;
        let list = &pb.ilists[member.phrase as usize];
        if idx + 1 < list.len() {
            heap.push(Reverse((list[idx + 1], m, idx + 1)));
        }
    }
    debug_assert_eq!(k, out.len());
}

fn preceding_byte(res: &PfpResult, m: &Member) -> u8 {
    res.dict[m.phrase as usize][m.offset as usize - 1]
}

fn group_weight(res: &PfpResult, members: &[Member]) -> usize {
    members.iter().map(|m| res.freq[m.phrase as usize] as usize).sum()
}

/// Merges dictionary suffixes and inverted lists into the final BWT.
pub fn merge_bwt(res: &PfpResult, pb: &ParseBwt, gsa: &GsaLcpResult) -> Result<BwtOutput> {
    let expected = res.text_len() + 1;
    let mut bytes = vec![0u8; expected];
    let mut offset = 0usize;
    scan_groups(res, gsa, |members| {
        let weight = group_weight(res, members);
        if offset + weight > expected {
            return Err(Error::LengthMismatch { emitted: offset + weight, expected });
        }
        emit_group(res, pb, members, &mut bytes[offset..offset + weight]);
        offset += weight;
        Ok(())
    })?;
    if offset != expected {
        return Err(Error::LengthMismatch { emitted: offset, expected });
    }
    Ok(BwtOutput { bytes })
}

/// Parallel variant of [`merge_bwt`]: groups are collected with their output
/// offsets, then emitted into disjoint regions of the output buffer. Output
/// is byte-identical to the serial merge. Without the `parallel` feature the
/// regions are filled sequentially.
pub fn merge_bwt_parallel(res: &PfpResult, pb: &ParseBwt, gsa: &GsaLcpResult) -> Result<BwtOutput> {
    let expected = res.text_len() + 1;
    let mut groups: Vec<Vec<Member>> = Vec::new();
    let mut total = 0usize;
    scan_groups(res, gsa, |members| {
        total += group_weight(res, members);
        groups.push(members.to_vec());
        Ok(())
    })?;
    if total != expected {
        return Err(Error::LengthMismatch { emitted: total, expected });
    }

    let mut bytes = vec![0u8; expected];
    let mut regions: Vec<&mut [u8]> = Vec::with_capacity(groups.len());
    let mut rest: &mut [u8] = &mut bytes;
    for g in &groups {
        let (region, tail) = rest.split_at_mut(group_weight(res, g));
        regions.push(region);
        rest = tail;
    }

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        groups
            .par_iter()
            .zip(regions)
            .for_each(|(g, region)| emit_group(res, pb, g, region));
    }
    #[cfg(not(feature = "parallel"))]
    for (g, region) in groups.iter().zip(regions) {
        emit_group(res, pb, g, region);
    }

    Ok(BwtOutput { bytes })
}

/// One row of the partial-sum table: a distinct dictionary suffix, how many
/// BWT characters map to it, and where its block starts in the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuffixGroupRow {
    pub rank: usize,
    pub freq: usize,
    pub partial_sum: usize,
}

/// Frequencies and preceding partial sums per distinct dictionary suffix, in
/// lexicographic order. The partial sums are exactly the output offsets of
/// the groups emitted by [`merge_bwt`].
pub fn partial_sums(res: &PfpResult, gsa: &GsaLcpResult) -> Result<Vec<SuffixGroupRow>> {
    let mut rows = Vec::new();
    let mut sum = 0usize;
    scan_groups(res, gsa, |members| {
        let freq = group_weight(res, members);
        rows.push(SuffixGroupRow { rank: rows.len(), freq, partial_sum: sum });
        sum += freq;
        Ok(())
    })?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::naive_bwt;
    use crate::parse::{parse_text, PfpResult};
    use crate::sufsort::gsa_lcp;
    use crate::trigger::WindowConfig;

    fn worked_example() -> PfpResult {
        let cfg = WindowConfig::explicit(2, [b"AC", b"AG", b"T!"]).unwrap();
        parse_text(b"GATTACAT!GATACAT!GATTAGATA", &cfg).unwrap()
    }

    #[test]
    fn parse_bwt_of_worked_example() {
        let res = worked_example();
        let pb = bwt_of_parse(&res).unwrap();
        // BWT(P) = [2,0,3,4,1,1] as inverted lists
        assert_eq!(pb.ilists, vec![vec![1], vec![4, 5], vec![0], vec![2], vec![3]]);
        assert_eq!(pb.wperm, b"TAAATT".to_vec());
    }

    #[test]
    fn parse_bwt_single_phrase() {
        let cfg = WindowConfig::explicit(1, Vec::<Vec<u8>>::new()).unwrap();
        let res = parse_text(b"AAA", &cfg).unwrap();
        let pb = bwt_of_parse(&res).unwrap();
        assert_eq!(pb.ilists, vec![vec![0]]);
        assert_eq!(pb.wperm, vec![res.lastw[0]]);
    }

    #[test]
    fn merge_reproduces_worked_example() {
        let res = worked_example();
        let pb = bwt_of_parse(&res).unwrap();
        let gsa = gsa_lcp(&res.dict).unwrap();
        let bwt = merge_bwt(&res, &pb, &gsa).unwrap();
        let mut expected = b"ATTTTTTCCGGGGAAA!".to_vec();
        expected.push(SENTINEL);
        expected.extend_from_slice(b"!AAATATAA");
        assert_eq!(bwt.bytes, expected);
        assert_eq!(bwt.bytes.len(), 27);
        assert_eq!(bwt.bytes[17], SENTINEL);
    }

    #[test]
    fn merge_matches_oracle_on_small_texts() {
        let texts: Vec<&[u8]> = vec![
            b"AAA",
            b"A",
            b"GATTACA",
            b"abracadabra",
            b"mississippi",
            b"ACGTACGTACGT",
        ];
        for text in texts {
            for (w, p) in [(1, 1), (1, 2), (2, 3), (3, 2), (4, 1)] {
                let cfg = WindowConfig::hash_mod(w, p).unwrap();
                let res = parse_text(text, &cfg).unwrap();
                let pb = bwt_of_parse(&res).unwrap();
                let gsa = gsa_lcp(&res.dict).unwrap();
                let got = merge_bwt(&res, &pb, &gsa).unwrap();
                let mut terminated = text.to_vec();
                terminated.push(SENTINEL);
                assert_eq!(
                    got.bytes,
                    naive_bwt(&terminated).unwrap(),
                    "text={:?} w={w} p={p}",
                    String::from_utf8_lossy(text)
                );
            }
        }
    }

    #[test]
    fn parallel_merge_matches_serial() {
        let res = worked_example();
        let pb = bwt_of_parse(&res).unwrap();
        let gsa = gsa_lcp(&res.dict).unwrap();
        assert_eq!(
            merge_bwt(&res, &pb, &gsa).unwrap(),
            merge_bwt_parallel(&res, &pb, &gsa).unwrap()
        );
    }

    #[test]
    fn partial_sums_match_worked_example_table() {
        let res = worked_example();
        let gsa = gsa_lcp(&res.dict).unwrap();
        let rows = partial_sums(&res, &gsa).unwrap();
        let expected_freq = [1, 1, 1, 1, 2, 1, 2, 1, 1, 1, 1, 2, 1, 1, 1, 1, 1, 1, 1, 2, 1, 1, 1];
        let expected_sum = [0, 1, 2, 3, 4, 6, 7, 9, 10, 11, 12, 13, 15, 16, 17, 18, 19, 20, 21, 22, 24, 25, 26];
        assert_eq!(rows.len(), 23);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.rank, i);
            assert_eq!(row.freq, expected_freq[i], "rank {i}");
            assert_eq!(row.partial_sum, expected_sum[i], "rank {i}");
        }
        let last = rows.last().unwrap();
        assert_eq!(last.partial_sum + last.freq, 27);
    }

    #[test]
    fn groups_tile_output() {
        let cfg = WindowConfig::hash_mod(2, 2).unwrap();
        let res = parse_text(b"the quick brown fox jumps over the lazy dog", &cfg).unwrap();
        let gsa = gsa_lcp(&res.dict).unwrap();
        let rows = partial_sums(&res, &gsa).unwrap();
        let mut expected_offset = 0;
        for row in &rows {
            assert_eq!(row.partial_sum, expected_offset);
            expected_offset += row.freq;
        }
        assert_eq!(expected_offset, res.text_len() + 1);
    }

    #[test]
    fn bwt_output_sentinel_invariant() {
        assert!(BwtOutput::from_bytes(vec![b'A', SENTINEL, b'B']).is_ok());
        assert!(BwtOutput::from_bytes(vec![b'A', b'B']).is_err());
        assert!(BwtOutput::from_bytes(vec![SENTINEL, SENTINEL]).is_err());
    }
}
