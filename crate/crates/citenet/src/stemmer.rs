//! Porter stemmer (the original 1980 algorithm).
//!
//! Operates on lowercase ASCII; words of one or two characters are returned
//! unchanged, as in the reference implementation.

pub fn stem(word: &str) -> String {
    if !word.is_ascii() || word.len() <= 2 {
        return word.to_string();
    }
    let mut w = word.as_bytes().to_vec();
    step1a(&mut w);
    step1b(&mut w);
    step1c(&mut w);
    step2(&mut w);
    step3(&mut w);
    step4(&mut w);
    step5(&mut w);
    String::from_utf8(w).expect("ascii in, ascii out")
}

fn is_consonant(w: &[u8], i: usize) -> bool {
    match w[i] {
        b'a' | b'e' | b'i' | b'o' | b'u' => false,
        b'y' => i == 0 || !is_consonant(w, i - 1),
        _ => true,
    }
}

/// Number of VC sequences in [C](VC)^m[V].
fn measure(w: &[u8]) -> usize {
    let mut m = 0;
    let mut prev_vowel = false;
    for i in 0..w.len() {
        let cons = is_consonant(w, i);
        if cons && prev_vowel {
            m += 1;
        }
        prev_vowel = !cons;
    }
    m
}

fn has_vowel(w: &[u8]) -> bool {
    (0..w.len()).any(|i| !is_consonant(w, i))
}

fn ends_double_consonant(w: &[u8]) -> bool {
    let n = w.len();
    n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1)
}

/// w[i-2..=i] is consonant-vowel-consonant with the final consonant not
/// w, x or y.
fn cvc_at(w: &[u8], i: usize) -> bool {
    if i < 2 || !is_consonant(w, i) || is_consonant(w, i - 1) || !is_consonant(w, i - 2) {
        return false;
    }
    !matches!(w[i], b'w' | b'x' | b'y')
}

fn ends(w: &[u8], suffix: &str) -> bool {
    w.len() > suffix.len() && w.ends_with(suffix.as_bytes())
}

fn replace(w: &mut Vec<u8>, suffix: &str, repl: &str) {
    let keep = w.len() - suffix.len();
    w.truncate(keep);
    w.extend_from_slice(repl.as_bytes());
}

fn step1a(w: &mut Vec<u8>) {
    if ends(w, "sses") {
        replace(w, "sses", "ss");
    } else if ends(w, "ies") {
        replace(w, "ies", "i");
    } else if ends(w, "ss") {
        // unchanged
    } else if ends(w, "s") {
        w.pop();
    }
}

fn step1b(w: &mut Vec<u8>) {
    if ends(w, "eed") {
        if measure(&w[..w.len() - 3]) > 0 {
            w.pop();
        }
        return;
    }
    let stripped = if ends(w, "ed") && has_vowel(&w[..w.len() - 2]) {
        w.truncate(w.len() - 2);
        true
    } else if ends(w, "ing") && has_vowel(&w[..w.len() - 3]) {
        w.truncate(w.len() - 3);
        true
    } else {
        false
    };
    if stripped {
        if ends(w, "at") || ends(w, "bl") || ends(w, "iz") {
            w.push(b'e');
        } else if ends_double_consonant(w) && !matches!(w[w.len() - 1], b'l' | b's' | b'z') {
            w.pop();
        } else if measure(w) == 1 && cvc_at(w, w.len() - 1) {
            w.push(b'e');
        }
    }
}

fn step1c(w: &mut [u8]) {
    let n = w.len();
    if n >= 2 && w[n - 1] == b'y' && has_vowel(&w[..n - 1]) {
        w[n - 1] = b'i';
    }
}

/// Apply the first (longest) matching rule whose stem condition m > 0.
/// A match with a failed condition still ends the step.
fn apply_rules(w: &mut Vec<u8>, rules: &[(&str, &str)]) {
    for (suffix, repl) in rules {
        if ends(w, suffix) {
            if measure(&w[..w.len() - suffix.len()]) > 0 {
                replace(w, suffix, repl);
            }
            return;
        }
    }
}

fn step2(w: &mut Vec<u8>) {
    apply_rules(w, &[
        ("ational", "ate"),
        ("tional", "tion"),
        ("enci", "ence"),
        ("anci", "ance"),
        ("izer", "ize"),
        ("abli", "able"),
        ("alli", "al"),
        ("entli", "ent"),
        ("eli", "e"),
        ("ousli", "ous"),
        ("ization", "ize"),
        ("ation", "ate"),
        ("ator", "ate"),
        ("alism", "al"),
        ("iveness", "ive"),
        ("fulness", "ful"),
        ("ousness", "ous"),
        ("aliti", "al"),
        ("iviti", "ive"),
        ("biliti", "ble"),
    ]);
}

fn step3(w: &mut Vec<u8>) {
    apply_rules(w, &[
        ("icate", "ic"),
        ("ative", ""),
        ("alize", "al"),
        ("iciti", "ic"),
        ("ical", "ic"),
        ("ful", ""),
        ("ness", ""),
    ]);
}

fn step4(w: &mut Vec<u8>) {
    const SUFFIXES: &[&str] = &[
        "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment", "ent",
        "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
    ];
    let mut matched: Option<&str> = None;
    for suffix in SUFFIXES {
        if ends(w, suffix) && matched.is_none_or(|prev| suffix.len() > prev.len()) {
            matched = Some(suffix);
        }
    }
    if let Some(suffix) = matched {
        let stem_len = w.len() - suffix.len();
        if suffix == "ion" && !matches!(w[stem_len - 1], b's' | b't') {
            return;
        }
        if measure(&w[..stem_len]) > 1 {
            w.truncate(stem_len);
        }
    }
}

fn step5(w: &mut Vec<u8>) {
    let n = w.len();
    if n >= 1 && w[n - 1] == b'e' {
        let m = measure(w);
        if m > 1 || (m == 1 && !cvc_at(w, n - 2)) {
            w.pop();
        }
    }
    let n = w.len();
    if n >= 2 && w[n - 1] == b'l' && ends_double_consonant(w) && measure(w) > 1 {
        w.pop();
    }
}
