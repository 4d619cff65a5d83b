//! Brute-force reference implementations for the test suites.
//!
//! Everything here favors obviousness over speed and shares no code with the
//! production paths it is used to check.

use crate::error::{Error, Result};

/// Suffix array by direct comparison sort of all suffixes.
pub fn naive_sa(text: &[u8]) -> Vec<usize> {
    let mut sa: Vec<usize> = (0..text.len()).collect();
    sa.sort_by(|&a, &b| text[a..].cmp(&text[b..]));
    sa
}

/// BWT of a terminated text: the character cyclically preceding each suffix,
/// in lexicographic suffix order.
///
/// The last byte must be the unique smallest, otherwise the suffix order is
/// ambiguous and we refuse.
pub fn naive_bwt(text_with_terminator: &[u8]) -> Result<Vec<u8>> {
    let n = text_with_terminator.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let term = text_with_terminator[n - 1];
    if text_with_terminator[..n - 1].iter().any(|&b| b <= term) {
        return Err(Error::BadTerminator);
    }
    let sa = naive_sa(text_with_terminator);
    Ok(sa
        .iter()
        .map(|&p| text_with_terminator[(p + n - 1) % n])
        .collect())
}

/// Occurrences of `pattern` in `text`, overlaps included. Empty patterns
/// count as zero occurrences.
pub fn naive_count(text: &[u8], pattern: &[u8]) -> usize {
    if pattern.is_empty() || pattern.len() > text.len() {
        return 0;
    }
    text.windows(pattern.len()).filter(|w| *w == pattern).count()
}

/// Inverts a BWT back to the terminated text by walking the LF mapping.
/// Used to self-check the oracle, not by any production path.
pub fn inverse_bwt(bwt: &[u8]) -> Vec<u8> {
    let n = bwt.len();
    let mut counts = [0usize; 256];
    for &b in bwt {
        counts[b as usize] += 1;
    }
    let mut c_table = [0usize; 256];
    let mut sum = 0;
    for (c, &cnt) in counts.iter().enumerate() {
        c_table[c] = sum;
        sum += cnt;
    }
    let mut occ = Vec::with_capacity(n);
    let mut running = [0usize; 256];
    for &b in bwt {
        occ.push(running[b as usize]);
        running[b as usize] += 1;
    }
    // Row 0 is the terminator's suffix; walking LF from it spells the text
    // backwards, terminator last.
    let mut out = vec![0u8; n];
    let mut row = 0;
    for i in (0..n).rev() {
        out[i] = bwt[row];
        row = c_table[bwt[row] as usize] + occ[row];
    }
    out.rotate_left(1);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SENTINEL;

    fn terminated(text: &[u8]) -> Vec<u8> {
        let mut t = text.to_vec();
        t.push(SENTINEL);
        t
    }

    #[test]
    fn worked_example_bwt() {
        let bwt = naive_bwt(&terminated(b"GATTACAT!GATACAT!GATTAGATA")).unwrap();
        let mut expected = b"ATTTTTTCCGGGGAAA!".to_vec();
        expected.push(SENTINEL);
        expected.extend_from_slice(b"!AAATATAA");
        assert_eq!(bwt, expected);
    }

    #[test]
    fn trivial_bwt() {
        assert_eq!(naive_bwt(&terminated(b"AAA")).unwrap(), terminated(b"AAA"));
    }

    #[test]
    fn bwt_is_permutation() {
        let text = terminated(b"mississippi");
        let mut bwt = naive_bwt(&text).unwrap();
        let mut t = text.clone();
        bwt.sort_unstable();
        t.sort_unstable();
        assert_eq!(bwt, t);
    }

    #[test]
    fn bad_terminator_rejected() {
        assert_eq!(naive_bwt(b"ABAB"), Err(Error::BadTerminator));
        assert_eq!(naive_bwt(&[5, 3, 4, 3]), Err(Error::BadTerminator));
    }

    #[test]
    fn inverse_recovers_text() {
        for text in [&b"GATTACAT!GATACAT!GATTAGATA"[..], b"AAA", b"x", b"banana"] {
            let t = terminated(text);
            let bwt = naive_bwt(&t).unwrap();
            assert_eq!(inverse_bwt(&bwt), t);
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(naive_count(b"GATTACAT!GATACAT!GATTAGATA", b"GAT"), 4);
        assert_eq!(naive_count(b"AAAA", b"AA"), 3);
        assert_eq!(naive_count(b"AAAA", b""), 0);
        assert_eq!(naive_count(b"AB", b"ABC"), 0);
    }
}
