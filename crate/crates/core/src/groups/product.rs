use super::{Group, GroupError, Result, Word};

pub(super) fn alt_mul(f0: &Group, f1: &Group, a: &[(u8, Word)], b: &[(u8, Word)]) -> Vec<(u8, Word)> {
    let mut out = a.to_vec();
    let mut rest = b.iter();
    for (k, w) in rest.by_ref() {
        match out.last() {
            Some((lk, lw)) if lk == k => {
                let f = if *k == 0 { f0 } else { f1 };
                let m = f.mul(lw, w);
                out.pop();
                if !f.is_identity(&m) {
                    out.push((*k, m));
                    break;
                }
            }
            _ => {
                out.push((*k, w.clone()));
                break;
            }
        }
    }
    out.extend(rest.cloned());
    out
}

/// Splits `x = g_1 h_1 g_2 h_2 ... g_n h_n` in a free product into
/// `((g_1..g_n), (h_1..h_n))`, where only `g_1` and `h_n` may be the
/// identity.
pub fn boxplus_decompose(g: &Group, x: &Word) -> Result<(Vec<Word>, Vec<Word>)> {
    let (Group::FreeProduct(f0, f1), Word::Alt(syl)) = (g, x) else {
        return Err(GroupError::MalformedWord(format!("not a free product word in {g}")));
    };
    let (mut first, mut second) = (Vec::new(), Vec::new());
    let mut it = syl.iter().peekable();
    if matches!(it.peek(), Some((1, _))) {
        first.push(f0.identity());
    }
    for (k, w) in it {
        if *k == 0 {
            first.push(w.clone());
        } else {
            second.push(w.clone());
        }
    }
    if first.len() > second.len() || first.is_empty() {
        second.push(f1.identity());
    }
    if first.is_empty() {
        first.push(f0.identity());
    }
    Ok((first, second))
}

/// Inverse of [`boxplus_decompose`].
pub fn boxplus_recompose(g: &Group, first: &[Word], second: &[Word]) -> Result<Word> {
    let Group::FreeProduct(f0, f1) = g else {
        return Err(GroupError::MalformedWord(format!("{g} is not a free product")));
    };
    if first.len() != second.len() || first.is_empty() {
        return Err(GroupError::LengthMismatch(first.len(), second.len()));
    }
    let mut acc = g.identity();
    for (a, b) in first.iter().zip(second) {
        f0.check_word(a)?;
        f1.check_word(b)?;
        acc = g.mul(&acc, &g.embed(0, a.clone()));
        acc = g.mul(&acc, &g.embed(1, b.clone()));
    }
    Ok(acc)
}
