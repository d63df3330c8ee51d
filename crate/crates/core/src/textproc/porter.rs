//! Porter (1980) suffix-stripping stemmer.
//!
//! Follows the original five-step rule set. Like the reference C
//! implementation, words of one or two characters are returned unchanged.

/// Stems a lowercase word.
pub fn stem(word: &str) -> String {
    let mut w: Vec<char> = word.chars().collect();
    if w.len() <= 2 {
        return word.to_string();
    }
    step1a(&mut w);
    step1b(&mut w);
    step1c(&mut w);
    step2(&mut w);
    step3(&mut w);
    step4(&mut w);
    step5(&mut w);
    w.into_iter().collect()
}

fn is_cons(w: &[char], i: usize) -> bool {
    match w[i] {
        'a' | 'e' | 'i' | 'o' | 'u' => false,
        'y' => i == 0 || !is_cons(w, i - 1),
        _ => true,
    }
}

/// Number of VC sequences in `[C](VC)^m[V]`.
fn measure(w: &[char]) -> usize {
    let n = w.len();
    let mut i = 0;
    while i < n && is_cons(w, i) {
        i += 1;
    }
    let mut m = 0;
    while i < n {
        while i < n && !is_cons(w, i) {
            i += 1;
        }
        if i == n {
            break;
        }
        m += 1;
        while i < n && is_cons(w, i) {
            i += 1;
        }
    }
    m
}

fn has_vowel(w: &[char]) -> bool {
    (0..w.len()).any(|i| !is_cons(w, i))
}

fn ends_double_cons(w: &[char]) -> bool {
    let n = w.len();
    n >= 2 && w[n - 1] == w[n - 2] && is_cons(w, n - 1)
}

/// `*o`: stem ends consonant-vowel-consonant, final consonant not w, x or y.
fn ends_cvc(w: &[char]) -> bool {
    let n = w.len();
    n >= 3
        && is_cons(w, n - 3)
        && !is_cons(w, n - 2)
        && is_cons(w, n - 1)
        && !matches!(w[n - 1], 'w' | 'x' | 'y')
}

fn ends_with(w: &[char], suffix: &str) -> bool {
    let n = suffix.chars().count();
    w.len() >= n && w[w.len() - n..].iter().copied().eq(suffix.chars())
}

fn replace_suffix(w: &mut Vec<char>, suffix: &str, replacement: &str) {
    let n = suffix.chars().count();
    w.truncate(w.len() - n);
    w.extend(replacement.chars());
}

/// Applies the rule whose suffix is the longest match, if its stem satisfies `cond`.
fn apply_longest(w: &mut Vec<char>, rules: &[(&str, &str)], cond: impl Fn(&[char], &str) -> bool) {
    let best = rules
        .iter()
        .filter(|(suffix, _)| ends_with(w, suffix))
        .max_by_key(|(suffix, _)| suffix.len());
    if let Some(&(suffix, replacement)) = best {
        let stem_len = w.len() - suffix.chars().count();
        if cond(&w[..stem_len], suffix) {
            replace_suffix(w, suffix, replacement);
        }
    }
}

fn step1a(w: &mut Vec<char>) {
    if ends_with(w, "sses") {
        replace_suffix(w, "sses", "ss");
    } else if ends_with(w, "ies") {
        replace_suffix(w, "ies", "i");
    } else if ends_with(w, "ss") {
    } else if ends_with(w, "s") {
        w.pop();
    }
}

fn step1b(w: &mut Vec<char>) {
    let stripped = if ends_with(w, "eed") {
        if measure(&w[..w.len() - 3]) > 0 {
            w.pop();
        }
        false
    } else if ends_with(w, "ed") && has_vowel(&w[..w.len() - 2]) {
        replace_suffix(w, "ed", "");
        true
    } else if ends_with(w, "ing") && has_vowel(&w[..w.len() - 3]) {
        replace_suffix(w, "ing", "");
        true
    } else {
        false
    };
    if !stripped {
        return;
    }
    if ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz") {
        w.push('e');
    } else if ends_double_cons(w) && !matches!(w[w.len() - 1], 'l' | 's' | 'z') {
        w.pop();
    } else if measure(w) == 1 && ends_cvc(w) {
        w.push('e');
    }
}

fn step1c(w: &mut [char]) {
    let n = w.len();
    if w[n - 1] == 'y' && has_vowel(&w[..n - 1]) {
        w[n - 1] = 'i';
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

const STEP4: &[(&str, &str)] = &[
    ("al", ""),
    ("ance", ""),
    ("ence", ""),
    ("er", ""),
    ("ic", ""),
    ("able", ""),
    ("ible", ""),
    ("ant", ""),
    ("ement", ""),
    ("ment", ""),
    ("ent", ""),
    ("ion", ""),
    ("ou", ""),
    ("ism", ""),
    ("ate", ""),
    ("iti", ""),
    ("ous", ""),
    ("ive", ""),
    ("ize", ""),
];

fn step2(w: &mut Vec<char>) {
    apply_longest(w, STEP2, |stem, _| measure(stem) > 0);
}

fn step3(w: &mut Vec<char>) {
    apply_longest(w, STEP3, |stem, _| measure(stem) > 0);
}

fn step4(w: &mut Vec<char>) {
    apply_longest(w, STEP4, |stem, suffix| {
        measure(stem) > 1
            && (suffix != "ion" || matches!(stem.last(), Some('s') | Some('t')))
    });
}

fn step5(w: &mut Vec<char>) {
    if w.last() == Some(&'e') {
        let stem = &w[..w.len() - 1];
        let m = measure(stem);
        if m > 1 || (m == 1 && !ends_cvc(stem)) {
            w.pop();
        }
    }
    if w.last() == Some(&'l') && ends_double_cons(w) && measure(w) > 1 {
        w.pop();
    }
}
