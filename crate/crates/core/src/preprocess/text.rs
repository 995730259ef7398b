//! Tweet text cleaning and tokenization.

/// Typographic characters kept by [`clean`], mapped to their ASCII form.
fn fold_typographic(c: char) -> Option<char> {
    match c {
        '\u{2018}' | '\u{2019}' | '\u{02BC}' => Some('\''),
        '\u{201C}' | '\u{201D}' => Some('"'),
        '\u{2013}' | '\u{2014}' => Some('-'),
        _ => None,
    }
}

fn is_url(word: &str) -> bool {
    let lower = word.to_ascii_lowercase();
    let lower = lower.trim_start_matches(|c: char| !c.is_alphanumeric());
    lower.starts_with("http://") || lower.starts_with("https://") || lower.starts_with("www.")
}

fn is_handle_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn decode_entities(text: &str) -> String {
    text.replace("&amp;", "&")
        .replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&#39;", "'")
}

/// Strips `@handle` mentions that start a word or follow punctuation.
fn strip_mentions(word: &str) -> String {
    let mut out = String::with_capacity(word.len());
    let mut chars = word.chars().peekable();
    let mut prev: Option<char> = None;
    while let Some(c) = chars.next() {
        let at_boundary = prev.is_none_or(|p| !p.is_alphanumeric());
        if c == '@' && at_boundary && chars.peek().is_some_and(|&n| is_handle_char(n)) {
            while chars.peek().is_some_and(|&n| is_handle_char(n)) {
                chars.next();
            }
            prev = Some(' ');
            continue;
        }
        out.push(c);
        prev = Some(c);
    }
    out
}

/// Removes URLs, mentions, `#` marks, emoji and other symbols, then
/// lowercases and collapses whitespace. Hashtag words are kept.
pub fn clean(text: &str) -> String {
    let decoded = decode_entities(text);
    let mut words: Vec<String> = Vec::new();
    for word in decoded.split_whitespace() {
        // Symbols go first so that a mention or URL exposed by their
        // removal is caught in the same pass.
        let mut kept = String::with_capacity(word.len());
        for c in word.chars() {
            if c == '#' {
                continue;
            }
            if c.is_alphanumeric() || c.is_ascii_punctuation() {
                kept.extend(
                    c.to_lowercase()
                        .filter(|l| l.is_alphanumeric() || l.is_ascii_punctuation()),
                );
            } else if let Some(f) = fold_typographic(c) {
                kept.push(f);
            }
        }
        let kept = strip_mentions(&kept);
        if !kept.is_empty() && !is_url(&kept) {
            words.push(kept);
        }
    }
    words.join(" ")
}

/// True when the raw text carries the conventional retweet marker.
pub fn has_retweet_prefix(text: &str) -> bool {
    text.trim_start().starts_with("RT @")
}

/// Splits on whitespace and trims punctuation from both ends of each token.
/// Interior punctuation such as apostrophes survives.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric()))
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect()
}

/// `tokenize(clean(text))`: the unstemmed, uncorrected token stream that
/// actor matching runs on.
pub fn surface_tokens(text: &str) -> Vec<String> {
    tokenize(&clean(text))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn clean_examples() {
        assert_eq!(
            clean("Vote wisely! https://t.co/x #AnambraDecides2017"),
            "vote wisely! anambradecides2017"
        );
        assert_eq!(clean(""), "");
        assert_eq!(clean("@user RT hello"), "rt hello");
    }

    #[test]
    fn clean_symbols_and_mentions() {
        assert_eq!(clean("Great 😀😀 day"), "great day");
        assert_eq!(clean("win🎉now"), "winnow");
        assert_eq!(clean("(@inecnigeria) says"), "() says");
        assert_eq!(clean("mail me@home.com"), "mail me@home.com");
        assert_eq!(clean("RT @ngr: results"), "rt : results");
        assert_eq!(clean("don’t   STOP"), "don't stop");
        assert_eq!(clean("Q&amp;A www.inec.gov.ng"), "q&a");
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(tokenize("obiano wins, again."), ["obiano", "wins", "again"]);
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("don't stop"), ["don't", "stop"]);
        assert_eq!(tokenize("-- ! ..."), Vec::<String>::new());
    }

    #[test]
    fn retweet_prefix() {
        assert!(has_retweet_prefix("RT @ngr: results out"));
        assert!(has_retweet_prefix("  RT @ngr"));
        assert!(!has_retweet_prefix("results out"));
        assert!(!has_retweet_prefix("rt @ngr lower"));
    }

    proptest! {
        #[test]
        fn clean_never_adds_tokens(text in "\\PC{0,80}") {
            let before = text.split_whitespace().count();
            let after = clean(&text).split_whitespace().count();
            prop_assert!(after <= before);
        }

        #[test]
        fn clean_is_idempotent(text in "[^&]{0,80}") {
            let once = clean(&text);
            prop_assert_eq!(clean(&once), once.clone());
        }

        #[test]
        fn tokens_never_empty_or_edge_punctuated(text in "\\PC{0,80}") {
            for t in tokenize(&clean(&text)) {
                prop_assert!(!t.is_empty());
                prop_assert!(t.chars().next().unwrap().is_alphanumeric());
                prop_assert!(t.chars().last().unwrap().is_alphanumeric());
            }
        }
    }
}
