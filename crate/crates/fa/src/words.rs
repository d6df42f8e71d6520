//! Enumeration of words in length-then-lexicographic order.

/// Iterates all words over an alphabet of `num_symbols` symbols with length
/// at most `max_len`, shortest first, lexicographic within a length. Words
/// are symbol-index sequences. An empty alphabet yields only the empty word.
pub fn words_up_to(num_symbols: usize, max_len: usize) -> impl Iterator<Item = Vec<usize>> {
    WordIter {
        num_symbols,
        max_len,
        next: Some(Vec::new()),
    }
}

/// Total number of words enumerated by [`words_up_to`], saturating.
pub fn word_count(num_symbols: usize, max_len: usize) -> u64 {
    let mut total: u64 = 0;
    let mut level: u64 = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(level);
        level = level.saturating_mul(num_symbols as u64);
        if level == 0 {
            break;
        }
    }
    total
}

struct WordIter {
    num_symbols: usize,
    max_len: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for WordIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        self.next = self.successor(&current);
        Some(current)
    }
}

impl WordIter {
    fn successor(&self, word: &[usize]) -> Option<Vec<usize>> {
        if self.num_symbols == 0 {
            return None;
        }
        let mut next = word.to_vec();
        // Odometer increment; on overflow move to the next length.
        for i in (0..next.len()).rev() {
            if next[i] + 1 < self.num_symbols {
                next[i] += 1;
                for slot in next.iter_mut().skip(i + 1) {
                    *slot = 0;
                }
                return Some(next);
            }
        }
        if word.len() < self.max_len {
            Some(vec![0; word.len() + 1])
        } else {
            None
        }
    }
}
