//! Porter suffix-stripping stemmer (the original 1980 algorithm).
//!
//! Operates on lowercase ASCII words; words of one or two letters are
//! returned unchanged. Within each rule step the first matching suffix
//! wins: if its condition fails, no other rule of that step is tried
//! (step 4's `ion` rule being the one documented exception, where a
//! failed stem condition lets the scan continue).

/// `true` when position `i` holds a consonant. `y` counts as a consonant
/// at the start of the word or after a vowel.
fn cons(w: &[u8], i: usize) -> bool {
    match w[i] {
        b'a' | b'e' | b'i' | b'o' | b'u' => false,
        b'y' => i == 0 || !cons(w, i - 1),
        _ => true,
    }
}

/// The measure m of a word: its vowel-consonant sequence count.
fn measure(w: &[u8]) -> usize {
    let mut m = 0;
    let mut in_vowel_run = false;
    for i in 0..w.len() {
        if cons(w, i) {
            if in_vowel_run {
                m += 1;
                in_vowel_run = false;
            }
        } else {
            in_vowel_run = true;
        }
    }
    m
}

fn has_vowel(w: &[u8]) -> bool {
    (0..w.len()).any(|i| !cons(w, i))
}

fn ends_double_cons(w: &[u8]) -> bool {
    let n = w.len();
    n >= 2 && w[n - 1] == w[n - 2] && cons(w, n - 1)
}

/// *o condition: ends consonant-vowel-consonant, final consonant not w/x/y.
fn ends_cvc(w: &[u8]) -> bool {
    let n = w.len();
    n >= 3
        && cons(w, n - 3)
        && !cons(w, n - 2)
        && cons(w, n - 1)
        && !matches!(w[n - 1], b'w' | b'x' | b'y')
}

fn ends(w: &[u8], suffix: &str) -> bool {
    w.len() >= suffix.len() && &w[w.len() - suffix.len()..] == suffix.as_bytes()
}

fn chop(w: &mut Vec<u8>, n: usize) {
    w.truncate(w.len() - n);
}

fn step1a(w: &mut Vec<u8>) {
    if ends(w, "sses") {
        chop(w, 2);
    } else if ends(w, "ies") {
        chop(w, 2);
    } else if ends(w, "ss") {
        // keep
    } else if ends(w, "s") {
        chop(w, 1);
    }
}

fn step1b(w: &mut Vec<u8>) {
    if ends(w, "eed") {
        if measure(&w[..w.len() - 3]) > 0 {
            chop(w, 1);
        }
        return;
    }
    let removed = if ends(w, "ed") && has_vowel(&w[..w.len() - 2]) {
        chop(w, 2);
        true
    } else if ends(w, "ing") && has_vowel(&w[..w.len() - 3]) {
        chop(w, 3);
        true
    } else {
        false
    };
    if removed {
        if ends(w, "at") || ends(w, "bl") || ends(w, "iz") {
            w.push(b'e');
        } else if ends_double_cons(w) && !matches!(w[w.len() - 1], b'l' | b's' | b'z') {
            chop(w, 1);
        } else if measure(w) == 1 && ends_cvc(w) {
            w.push(b'e');
        }
    }
}

fn step1c(w: &mut [u8]) {
    let n = w.len();
    if n >= 1 && w[n - 1] == b'y' && has_vowel(&w[..n - 1]) {
        w[n - 1] = b'i';
    }
}

/// First suffix match wins; replacement applies only when m(stem) exceeds
/// `min_measure`.
fn rule_step(w: &mut Vec<u8>, rules: &[(&str, &str)], min_measure: usize) {
    for (suffix, replacement) in rules {
        if ends(w, suffix) {
            let stem_len = w.len() - suffix.len();
            if measure(&w[..stem_len]) > min_measure {
                w.truncate(stem_len);
                w.extend_from_slice(replacement.as_bytes());
            }
            return;
        }
    }
}

const STEP2: &[(&str, &str)] = &[
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
];

const STEP3: &[(&str, &str)] = &[
    ("icate", "ic"),
    ("ative", ""),
    ("alize", "al"),
    ("iciti", "ic"),
    ("ical", "ic"),
    ("ful", ""),
    ("ness", ""),
];

const STEP4: &[&str] = &[
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment", "ent", "ion", "ou",
    "ism", "ate", "iti", "ous", "ive", "ize",
];

fn step4(w: &mut Vec<u8>) {
    for suffix in STEP4 {
        if ends(w, suffix) {
            let stem_len = w.len() - suffix.len();
            if *suffix == "ion" && !(stem_len >= 1 && matches!(w[stem_len - 1], b's' | b't')) {
                continue;
            }
            if measure(&w[..stem_len]) > 1 {
                w.truncate(stem_len);
            }
            return;
        }
    }
}

fn step5a(w: &mut Vec<u8>) {
    let n = w.len();
    if n >= 1 && w[n - 1] == b'e' {
        let stem = &w[..n - 1];
        let m = measure(stem);
        if m > 1 || (m == 1 && !ends_cvc(stem)) {
            chop(w, 1);
        }
    }
}

fn step5b(w: &mut Vec<u8>) {
    if w.len() >= 2 && w[w.len() - 1] == b'l' && ends_double_cons(w) && measure(&w[..w.len() - 1]) > 1
    {
        chop(w, 1);
    }
}

/// Stems one lowercase word.
pub fn stem(word: &str) -> String {
    if word.len() <= 2 || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return word.to_owned();
    }
    let mut w = word.as_bytes().to_vec();
    step1a(&mut w);
    step1b(&mut w);
    step1c(&mut w);
    rule_step(&mut w, STEP2, 0);
    rule_step(&mut w, STEP3, 0);
    step4(&mut w);
    step5a(&mut w);
    step5b(&mut w);
    String::from_utf8(w).expect("ASCII in, ASCII out")
}
