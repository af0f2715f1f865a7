use super::{Elem, FinStructure, PartialIso, Result, StructureError};

/// Searches for an isomorphism `s -> t` by backtracking over carrier
/// bijections, pruning with the closure of the partial map. Returns the
/// per-sort bijection as index vectors (`result[sort][i]` is the image of
/// element `i`).
pub fn iso_search(s: &FinStructure, t: &FinStructure) -> Result<Option<Vec<Vec<usize>>>> {
    if s.signature() != t.signature() {
        return Err(StructureError::SignatureMismatch);
    }
    let sorts = s.signature().sorts.len();
    if (0..sorts).any(|k| s.carrier_size(k) != t.carrier_size(k)) {
        return Ok(None);
    }
    let Ok(root) = PartialIso::new(s, t) else {
        return Ok(None);
    };
    let order: Vec<Elem> = s.elements().collect();
    Ok(extend(&root, &order).map(|p| {
        (0..sorts)
            .map(|k| (0..s.carrier_size(k)).map(|i| p.image(Elem::new(k, i)).unwrap().index).collect())
            .collect()
    }))
}

fn extend<'a>(p: &PartialIso<'a>, order: &[Elem]) -> Option<PartialIso<'a>> {
    let Some(&next) = order.iter().find(|&&e| p.image(e).is_none()) else {
        return Some(p.clone());
    };
    let t = p.right();
    for j in 0..t.carrier_size(next.sort) {
        let cand = Elem::new(next.sort, j);
        if p.preimage(cand).is_some() {
            continue;
        }
        let mut q = p.clone();
        if q.extend([(next, cand)]).is_ok() {
            if let Some(done) = extend(&q, order) {
                return Some(done);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{parse_structure, qf_equal, SortedTuple};

    const CHAIN_ABC: &str = "structure c1\nsort S = a b c\nrel R/2 : S S = (a b) (b c) (a c)\n";
    const CHAIN_PERM: &str = "structure c2\nsort S = z x y\nrel R/2 : S S = (y z) (z x) (y x)\n";

    #[test]
    fn permuted_chain_is_isomorphic() {
        let s = parse_structure(CHAIN_ABC).unwrap();
        let t = parse_structure(CHAIN_PERM).unwrap();
        let map = iso_search(&s, &t).unwrap().expect("isomorphic");
        let names: Vec<&str> = map[0].iter().map(|&i| t.carrier(0)[i].as_str()).collect();
        assert_eq!(names, vec!["y", "z", "x"]);
        let a = s.enumeration();
        let b = SortedTuple(a.0.iter().map(|e| Elem::new(0, map[0][e.index])).collect());
        assert!(qf_equal(&s, &a, &t, &b).unwrap());
    }

    #[test]
    fn self_isomorphism_is_identity() {
        let s = parse_structure(CHAIN_ABC).unwrap();
        assert_eq!(iso_search(&s, &s).unwrap(), Some(vec![vec![0, 1, 2]]));
    }

    #[test]
    fn size_mismatch_is_absent() {
        let s = parse_structure(CHAIN_ABC).unwrap();
        let t = parse_structure("structure t\nsort S = a b\nrel R/2 : S S = (a b)\n").unwrap();
        assert_eq!(iso_search(&s, &t).unwrap(), None);
    }
}
