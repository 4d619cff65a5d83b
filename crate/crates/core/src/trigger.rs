//! Rolling-window trigger predicate that decides where phrases end.
//!
//! A window of `w` consecutive input bytes is a trigger either because it is a
//! member of an explicit set of strings, or because its Karp-Rabin fingerprint
//! is zero modulo `p`. The fingerprint is maintained incrementally as the
//! window slides, one O(1) update per byte.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Base of the polynomial fingerprint.
const KR_BASE: u64 = 256;
/// Modulus of the window fingerprint: a prime below 2^31, so every
/// intermediate product fits comfortably in 64 bits.
const KR_PRIME: u64 = 1_999_999_973;
/// Modulus of the phrase identity fingerprint (see [`phrase_fingerprint`]):
/// the Mersenne prime 2^61 - 1, independent of the window hash.
const ID_PRIME: u128 = (1u128 << 61) - 1;

/// How window contents are classified as triggers.
#[derive(Debug, Clone)]
pub enum TriggerMode {
    /// The window triggers iff its bytes are one of these strings. Every
    /// member must have length exactly `w`.
    ExplicitSet(HashSet<Vec<u8>>),
    /// The window triggers iff its fingerprint is 0 modulo this parameter.
    HashMod(u64),
}

/// Window length plus the trigger rule.
#[derive(Debug, Clone)]
pub struct WindowConfig {
    w: usize,
    mode: TriggerMode,
}

impl WindowConfig {
    /// Hash-mod rule: window of length `w` triggers when its fingerprint is
    /// divisible by `p`. Any `p >= 1` is accepted; primality only shapes the
    /// phrase-length distribution, never correctness.
    pub fn hash_mod(w: usize, p: u64) -> Result<Self> {
        if w < 1 {
            return Err(Error::MalformedParse("window length must be >= 1".into()));
        }
        if p < 1 {
            return Err(Error::MalformedParse("hash modulus must be >= 1".into()));
        }
        Ok(Self { w, mode: TriggerMode::HashMod(p) })
    }

    /// Explicit trigger set: window triggers when its bytes are a member.
    pub fn explicit<I, S>(w: usize, strings: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        if w < 1 {
            return Err(Error::MalformedParse("window length must be >= 1".into()));
        }
        let mut set = HashSet::new();
        for s in strings {
            let s = s.as_ref();
            if s.len() != w {
                return Err(Error::MalformedParse(format!(
                    "trigger string of length {} does not match window length {}",
                    s.len(),
                    w
                )));
            }
            set.insert(s.to_vec());
        }
        Ok(Self { w, mode: TriggerMode::ExplicitSet(set) })
    }

    pub fn window_len(&self) -> usize {
        self.w
    }

    pub fn mode(&self) -> &TriggerMode {
        &self.mode
    }
}

/// Karp-Rabin fingerprint of a whole byte string: the polynomial
/// `sum(s[i] * 256^(len-1-i)) mod 1999999973`.
pub fn kr_hash(s: &[u8]) -> u64 {
    s.iter().fold(0u64, |h, &b| (h * KR_BASE + b as u64) % KR_PRIME)
}

/// Identity fingerprint used to deduplicate phrases: same polynomial scheme
/// but modulo 2^61 - 1, so a collision between the two hashes at once is
/// astronomically unlikely. Collisions are detected by byte comparison, not
/// tolerated.
pub fn phrase_fingerprint(s: &[u8]) -> u64 {
    s.iter()
        .fold(0u128, |h, &b| (h * KR_BASE as u128 + b as u128) % ID_PRIME) as u64
}

/// The last `w` bytes seen, with their fingerprint maintained incrementally.
#[derive(Debug, Clone)]
pub struct RollingWindow {
    buf: Vec<u8>,
    head: usize,
    filled: usize,
    fingerprint: u64,
    /// 256^(w-1) mod KR_PRIME, the weight of the byte about to be evicted.
    evict_weight: u64,
}

impl RollingWindow {
    pub fn new(w: usize) -> Self {
        assert!(w >= 1, "window length must be >= 1");
        let mut evict_weight = 1u64;
        for _ in 1..w {
            evict_weight = evict_weight * KR_BASE % KR_PRIME;
        }
        Self { buf: vec![0; w], head: 0, filled: 0, fingerprint: 0, evict_weight }
    }

    /// Appends `incoming`, evicting the oldest byte once the window is full.
    /// The fingerprint is updated in O(1) and always equals `kr_hash` of the
    /// current contents.
    pub fn roll(&mut self, incoming: u8) {
        if self.filled == self.buf.len() {
            let outgoing = self.buf[self.head] as u64;
            self.fingerprint =
                (self.fingerprint + KR_PRIME - outgoing * self.evict_weight % KR_PRIME) % KR_PRIME;
        } else {
            self.filled += 1;
        }
        self.fingerprint = (self.fingerprint * KR_BASE + incoming as u64) % KR_PRIME;
        self.buf[self.head] = incoming;
        self.head = (self.head + 1) % self.buf.len();
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn filled(&self) -> usize {
        self.filled
    }

    pub fn is_full(&self) -> bool {
        self.filled == self.buf.len()
    }

    /// Window contents oldest-first. Meaningful once the window is full.
    pub fn contents(&self) -> Vec<u8> {
        let w = self.buf.len();
        let start = (self.head + w - self.filled) % w;
        (0..self.filled).map(|i| self.buf[(start + i) % w]).collect()
    }
}

/// Does the current window end a phrase?
pub fn is_trigger(cfg: &WindowConfig, win: &RollingWindow) -> Result<bool> {
    if !win.is_full() {
        return Err(Error::WindowNotFull { filled: win.filled(), window: cfg.w });
    }
    Ok(match &cfg.mode {
        TriggerMode::ExplicitSet(set) => set.contains(&win.contents()),
        TriggerMode::HashMod(p) => win.fingerprint() % p == 0,
    })
}
