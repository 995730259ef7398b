//! Porter suffix-stripping stemmer, in the frozen form distributed with
//! Martin Porter's reference implementations (`bli -> ble`, `logi -> log`,
//! words of one or two letters left alone).

/// Stems a lowercase word. Anything that is not purely ASCII lowercase
/// letters (digits, apostrophes, non-Latin script) is returned unchanged.
pub fn stem(word: &str) -> String {
    if word.len() <= 2 || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return word.to_string();
    }
    let mut w = Word(word.as_bytes().to_vec());
    w.step1a();
    w.step1b();
    w.step1c();
    w.step2();
    w.step3();
    w.step4();
    w.step5a();
    w.step5b();
    String::from_utf8(w.0).expect("ascii in, ascii out")
}

type Condition = fn(&Word, usize) -> bool;

struct Word(Vec<u8>);

impl Word {
    fn is_consonant(&self, i: usize) -> bool {
        match self.0[i] {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => i == 0 || !self.is_consonant(i - 1),
            _ => true,
        }
    }

    /// Number of VC sequences in `self[..end]`.
    fn measure(&self, end: usize) -> usize {
        let mut i = 0;
        while i < end && self.is_consonant(i) {
            i += 1;
        }
        let mut m = 0;
        while i < end {
            while i < end && !self.is_consonant(i) {
                i += 1;
            }
            if i == end {
                break;
            }
            while i < end && self.is_consonant(i) {
                i += 1;
            }
            m += 1;
        }
        m
    }

    fn has_vowel(&self, end: usize) -> bool {
        (0..end).any(|i| !self.is_consonant(i))
    }

    fn ends_double_consonant(&self, end: usize) -> bool {
        end >= 2 && self.0[end - 1] == self.0[end - 2] && self.is_consonant(end - 1)
    }

    /// `*o`: stem ends consonant-vowel-consonant, final consonant not w, x or y.
    fn ends_cvc(&self, end: usize) -> bool {
        end >= 3
            && self.is_consonant(end - 3)
            && !self.is_consonant(end - 2)
            && self.is_consonant(end - 1)
            && !matches!(self.0[end - 1], b'w' | b'x' | b'y')
    }

    fn ends_with(&self, suffix: &str) -> bool {
        self.0.ends_with(suffix.as_bytes())
    }

    fn replace_suffix(&mut self, suffix_len: usize, replacement: &str) {
        let keep = self.0.len() - suffix_len;
        self.0.truncate(keep);
        self.0.extend_from_slice(replacement.as_bytes());
    }

    /// Applies the longest matching rule if its condition holds on the stem.
    /// A failed condition ends the step.
    fn apply_rules(&mut self, rules: &[(&str, &str, Condition)]) -> bool {
        let Some(&(suffix, replacement, cond)) = rules
            .iter()
            .filter(|(s, _, _)| self.ends_with(s))
            .max_by_key(|(s, _, _)| s.len())
        else {
            return false;
        };
        let stem_len = self.0.len() - suffix.len();
        if cond(self, stem_len) {
            self.replace_suffix(suffix.len(), replacement);
            true
        } else {
            false
        }
    }

    fn step1a(&mut self) {
        if self.ends_with("sses") {
            self.replace_suffix(4, "ss");
        } else if self.ends_with("ies") {
            self.replace_suffix(3, "i");
        } else if self.ends_with("ss") {
        } else if self.ends_with("s") {
            self.replace_suffix(1, "");
        }
    }

    fn step1b(&mut self) {
        let n = self.0.len();
        if self.ends_with("eed") {
            if self.measure(n - 3) > 0 {
                self.replace_suffix(3, "ee");
            }
            return;
        }
        let cut = if self.ends_with("ed") && self.has_vowel(n - 2) {
            2
        } else if self.ends_with("ing") && self.has_vowel(n - 3) {
            3
        } else {
            return;
        };
        self.replace_suffix(cut, "");

        let n = self.0.len();
        if self.ends_with("at") || self.ends_with("bl") || self.ends_with("iz") {
            self.0.push(b'e');
        } else if self.ends_double_consonant(n) && !matches!(self.0[n - 1], b'l' | b's' | b'z') {
            self.0.pop();
        } else if self.measure(n) == 1 && self.ends_cvc(n) {
            self.0.push(b'e');
        }
    }

    fn step1c(&mut self) {
        let n = self.0.len();
        if self.ends_with("y") && self.has_vowel(n - 1) {
            self.0[n - 1] = b'i';
        }
    }

    fn step2(&mut self) {
        const M_POS: Condition = |w, end| w.measure(end) > 0;
        self.apply_rules(&[
            ("ational", "ate", M_POS),
            ("tional", "tion", M_POS),
            ("enci", "ence", M_POS),
            ("anci", "ance", M_POS),
            ("izer", "ize", M_POS),
            ("bli", "ble", M_POS),
            ("alli", "al", M_POS),
            ("entli", "ent", M_POS),
            ("eli", "e", M_POS),
            ("ousli", "ous", M_POS),
            ("ization", "ize", M_POS),
            ("ation", "ate", M_POS),
            ("ator", "ate", M_POS),
            ("alism", "al", M_POS),
            ("iveness", "ive", M_POS),
            ("fulness", "ful", M_POS),
            ("ousness", "ous", M_POS),
            ("aliti", "al", M_POS),
            ("iviti", "ive", M_POS),
            ("biliti", "ble", M_POS),
            ("logi", "log", M_POS),
        ]);
    }

    fn step3(&mut self) {
        const M_POS: Condition = |w, end| w.measure(end) > 0;
        self.apply_rules(&[
            ("icate", "ic", M_POS),
            ("ative", "", M_POS),
            ("alize", "al", M_POS),
            ("iciti", "ic", M_POS),
            ("ical", "ic", M_POS),
            ("ful", "", M_POS),
            ("ness", "", M_POS),
        ]);
    }

    fn step4(&mut self) {
        const M_GT1: Condition = |w, end| w.measure(end) > 1;
        const ION: Condition =
            |w, end| w.measure(end) > 1 && end > 0 && matches!(w.0[end - 1], b's' | b't');
        self.apply_rules(&[
            ("al", "", M_GT1),
            ("ance", "", M_GT1),
            ("ence", "", M_GT1),
            ("er", "", M_GT1),
            ("ic", "", M_GT1),
            ("able", "", M_GT1),
            ("ible", "", M_GT1),
            ("ant", "", M_GT1),
            ("ement", "", M_GT1),
            ("ment", "", M_GT1),
            ("ent", "", M_GT1),
            ("ion", "", ION),
            ("ou", "", M_GT1),
            ("ism", "", M_GT1),
            ("ate", "", M_GT1),
            ("iti", "", M_GT1),
            ("ous", "", M_GT1),
            ("ive", "", M_GT1),
            ("ize", "", M_GT1),
        ]);
    }

    fn step5a(&mut self) {
        if !self.ends_with("e") {
            return;
        }
        let stem_len = self.0.len() - 1;
        let m = self.measure(stem_len);
        if m > 1 || (m == 1 && !self.ends_cvc(stem_len)) {
            self.0.pop();
        }
    }

    fn step5b(&mut self) {
        let n = self.0.len();
        if self.measure(n) > 1 && self.ends_double_consonant(n) && self.0[n - 1] == b'l' {
            self.0.pop();
        }
    }
}
