//! Prefix-free parsing of a text into a dictionary of phrases and a parse of
//! dictionary ranks.
//!
//! Conceptually the text is padded to `sentinel . T . sentinel^w` and split
//! at trigger windows: each phrase runs from the start of one trigger window
//! to the end of the next, so consecutive phrases overlap in exactly `w`
//! bytes. Phrases are deduplicated through a 64-bit identity fingerprint
//! (collisions are detected by byte comparison and abort the run), then the
//! dictionary is sorted and the parse rewritten in terms of lexicographic
//! ranks.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::trigger::{is_trigger, phrase_fingerprint, RollingWindow, WindowConfig};
use crate::{MIN_INPUT_BYTE, SENTINEL};

/// Output of the parser: the sorted dictionary plus everything needed to
/// rebuild the BWT without the text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfpResult {
    /// Distinct phrases in strict lexicographic order. The first phrase of
    /// the text carries a leading sentinel byte, the last one `window`
    /// trailing sentinels.
    pub dict: Vec<Vec<u8>>,
    /// Occurrence count per dictionary phrase.
    pub freq: Vec<u32>,
    /// The text as a sequence of 0-based dictionary ranks.
    pub parse: Vec<u32>,
    /// For each parse position, the phrase byte at position `window + 1`
    /// from the end. These supply BWT characters for suffixes that coincide
    /// with whole phrases.
    pub lastw: Vec<u8>,
    /// Window length the text was parsed with.
    pub window: usize,
}

impl PfpResult {
    /// Number of parse entries, `z`.
    pub fn len(&self) -> usize {
        self.parse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parse.is_empty()
    }

    /// Length of the original text, recovered from the phrase-length
    /// accounting: every occurrence contributes its length minus the overlap,
    /// and one extra byte stands for the BWT terminator.
    pub fn text_len(&self) -> usize {
        let padded: usize = self
            .parse
            .iter()
            .map(|&r| self.dict[r as usize].len() - self.window)
            .sum();
        padded - 1
    }

    /// Total bytes across dictionary phrases.
    pub fn dict_bytes(&self) -> usize {
        self.dict.iter().map(Vec::len).sum()
    }
}

fn validate_input(text: &[u8]) -> Result<()> {
    if text.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(offset) = text.iter().position(|&b| b < MIN_INPUT_BYTE) {
        return Err(Error::InputAlphabet { byte: text[offset], offset });
    }
    Ok(())
}

/// One-pass parse of `text`. Single-threaded; see [`parse_chunked`] for the
/// chunked equivalent with identical output.
pub fn parse_text(text: &[u8], cfg: &WindowConfig) -> Result<PfpResult> {
    validate_input(text)?;
    let w = cfg.window_len();

    let mut dict_map: HashMap<u64, Vec<u8>> = HashMap::new();
    let mut fp_parse: Vec<u64> = Vec::new();
    let mut intern = |phrase: Vec<u8>, fp_parse: &mut Vec<u64>| -> Result<()> {
        let fp = phrase_fingerprint(&phrase);
        match dict_map.entry(fp) {
            Entry::Occupied(e) if e.get() != &phrase => {
                return Err(Error::FingerprintCollision { fingerprint: fp })
            }
            Entry::Occupied(_) => {}
            Entry::Vacant(v) => {
                v.insert(phrase);
            }
        }
        fp_parse.push(fp);
        Ok(())
    };

    let mut phrase = vec![SENTINEL];
    let mut win = RollingWindow::new(w);
    for &b in text {
        phrase.push(b);
        win.roll(b);
        if win.is_full() && is_trigger(cfg, &win)? {
            intern(std::mem::replace(&mut phrase, win.contents()), &mut fp_parse)?;
        }
    }
    // The final phrase absorbs the trailing sentinels. When the very last
    // window was a trigger, `phrase` already restarted at that window, so the
    // last phrase is exactly those w bytes plus the padding.
    phrase.extend(std::iter::repeat(SENTINEL).take(w));
    intern(phrase, &mut fp_parse)?;

    finalize(dict_map, fp_parse, w)
}

/// Rebuilds the exact original text from a parse. Inverse of [`parse_text`];
/// fails with [`Error::MalformedParse`] when the phrase overlaps disagree.
pub fn reconstruct_text(res: &PfpResult) -> Result<Vec<u8>> {
    let w = res.window;
    if res.parse.is_empty() || res.dict.is_empty() {
        return Err(Error::MalformedParse("empty parse".into()));
    }
    for &r in &res.parse {
        if r as usize >= res.dict.len() {
            return Err(Error::MalformedParse(format!("rank {r} out of range")));
        }
    }

    let mut padded = res.dict[res.parse[0] as usize].clone();
    for &r in &res.parse[1..] {
        let next = &res.dict[r as usize];
        if padded[padded.len() - w..] != next[..w] {
            return Err(Error::MalformedParse(
                "consecutive phrases do not overlap in w bytes".into(),
            ));
        }
        padded.extend_from_slice(&next[w..]);
    }

    if padded.len() < 1 + w + 1
        || padded[0] != SENTINEL
        || padded[padded.len() - w..].iter().any(|&b| b != SENTINEL)
    {
        return Err(Error::MalformedParse("sentinel padding missing".into()));
    }
    let text = padded[1..padded.len() - w].to_vec();
    if text.iter().any(|&b| b < MIN_INPUT_BYTE) {
        return Err(Error::MalformedParse("reserved byte inside text".into()));
    }
    Ok(text)
}

/// Window starts of every trigger whose window begins in `[lo, hi)`. The scan
/// reads up to `w - 1` bytes past `hi`, which is how chunk workers agree on
/// boundary triggers: the decision depends only on window contents.
fn scan_triggers(text: &[u8], cfg: &WindowConfig, lo: usize, hi: usize) -> Result<Vec<usize>> {
    let w = cfg.window_len();
    let mut out = Vec::new();
    let mut win = RollingWindow::new(w);
    let scan_end = text.len().min(hi + w - 1);
    for i in lo..scan_end {
        win.roll(text[i]);
        if win.is_full() {
            let start = i + 1 - w;
            if start >= hi {
                break;
            }
            if is_trigger(cfg, &win)? {
                out.push(start);
            }
        }
    }
    Ok(out)
}

/// A phrase span over the padded text: `text[start..end]` with optional
/// sentinel padding on either side.
#[derive(Debug, Clone, Copy)]
struct Span {
    start: usize,
    end: usize,
    lead_sentinel: bool,
    trail_sentinels: bool,
}

impl Span {
    fn materialize(&self, text: &[u8], w: usize) -> Vec<u8> {
        let mut phrase = Vec::with_capacity(
            self.end - self.start + self.lead_sentinel as usize + if self.trail_sentinels { w } else { 0 },
        );
        if self.lead_sentinel {
            phrase.push(SENTINEL);
        }
        phrase.extend_from_slice(&text[self.start..self.end]);
        if self.trail_sentinels {
            phrase.extend(std::iter::repeat(SENTINEL).take(w));
        }
        phrase
    }
}

fn spans_from_triggers(n: usize, triggers: &[usize]) -> Vec<Span> {
    let mut spans = Vec::with_capacity(triggers.len() + 1);
    match triggers.first() {
        None => spans.push(Span { start: 0, end: n, lead_sentinel: true, trail_sentinels: true }),
        Some(&first) => {
            // first phrase: leading sentinel through the end of the first
            // trigger window; then trigger-to-trigger; the last phrase picks
            // up the trailing padding.
            spans.push(Span {
                start: 0,
                end: 0, // placeholder, fixed below
                lead_sentinel: true,
                trail_sentinels: false,
            });
            let mut prev = first;
            for &t in &triggers[1..] {
                spans.push(Span { start: prev, end: t, lead_sentinel: false, trail_sentinels: false });
                prev = t;
            }
            spans.push(Span { start: prev, end: n, lead_sentinel: false, trail_sentinels: true });
            spans[0].end = first; // ends are extended by w below
        }
    }
    spans
}

/// Chunked parse: `chunks` workers find triggers independently, boundary
/// phrases are stitched by the coordinator, and the result is byte-identical
/// to [`parse_text`] for every chunk count.
pub fn parse_chunked(text: &[u8], cfg: &WindowConfig, chunks: usize) -> Result<PfpResult> {
    validate_input(text)?;
    if chunks < 1 {
        return Err(Error::MalformedParse("chunk count must be >= 1".into()));
    }
    let w = cfg.window_len();
    let n = text.len();

    let bounds: Vec<(usize, usize)> =
        (0..chunks).map(|j| (j * n / chunks, (j + 1) * n / chunks)).collect();

    let trigger_lists: Vec<Vec<usize>> = map_chunks(&bounds, |&(lo, hi)| {
        scan_triggers(text, cfg, lo, hi)
    })?;
    let triggers: Vec<usize> = trigger_lists.into_iter().flatten().collect();

    // A phrase runs from its starting trigger to the END of the next trigger
    // window, hence the +w on every span except where padding takes over.
    let mut spans = spans_from_triggers(n, &triggers);
    let last = spans.len() - 1;
    for span in &mut spans[..last] {
        span.end += w;
    }

    let table = PhraseTable::default();
    let fp_parse: Vec<u64> = map_chunks(&spans, |span| {
        table.insert_or_get(span.materialize(text, w))
    })?;

    finalize(table.into_map(), fp_parse, w)
}

/// Insert-or-get dictionary shared by chunk workers.
#[derive(Default)]
struct PhraseTable {
    inner: Mutex<HashMap<u64, Vec<u8>>>,
}

impl PhraseTable {
    fn insert_or_get(&self, phrase: Vec<u8>) -> Result<u64> {
        let fp = phrase_fingerprint(&phrase);
        let mut map = self.inner.lock().unwrap();
        match map.entry(fp) {
            Entry::Occupied(e) if e.get() != &phrase => {
                Err(Error::FingerprintCollision { fingerprint: fp })
            }
            Entry::Occupied(_) => Ok(fp),
            Entry::Vacant(v) => {
                v.insert(phrase);
                Ok(fp)
            }
        }
    }

    fn into_map(self) -> HashMap<u64, Vec<u8>> {
        self.inner.into_inner().unwrap()
    }
}

#[cfg(feature = "parallel")]
fn map_chunks<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_chunks<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    F: Fn(&T) -> Result<U>,
{
    items.iter().map(f).collect()
}

/// Sorts the dictionary, rewrites the fingerprint parse as ranks and fills in
/// frequencies and the last-character array.
fn finalize(dict_map: HashMap<u64, Vec<u8>>, fp_parse: Vec<u64>, w: usize) -> Result<PfpResult> {
    let z = fp_parse.len();
    if z as u64 >= u64::from(u32::MAX) {
        return Err(Error::Overflow { what: "parse length", value: z as u64 });
    }
    if dict_map.len() as u64 >= u64::from(u32::MAX) {
        return Err(Error::Overflow { what: "dictionary size", value: dict_map.len() as u64 });
    }

    let mut entries: Vec<(u64, Vec<u8>)> = dict_map.into_iter().collect();
    entries.sort_by(|a, b| a.1.cmp(&b.1));
    let rank_of: HashMap<u64, u32> =
        entries.iter().enumerate().map(|(r, (fp, _))| (*fp, r as u32)).collect();
    let dict: Vec<Vec<u8>> = entries.into_iter().map(|(_, p)| p).collect();

    let parse: Vec<u32> = fp_parse.iter().map(|fp| rank_of[fp]).collect();
    let mut freq = vec![0u32; dict.len()];
    for &r in &parse {
        freq[r as usize] += 1;
    }
    let lastw: Vec<u8> =
        parse.iter().map(|&r| { let d = &dict[r as usize]; d[d.len() - 1 - w] }).collect();

    Ok(PfpResult { dict, freq, parse, lastw, window: w })
}
