//! Deterministic enumeration of position tuples.
//!
//! Tuples come out by arity, then lexicographically (an odometer over
//! `0..n`). Repetitions are included. Every "first counterexample" reported
//! by the checkers is first in this order.

/// Lending-style cursor over all tuples of positions in `0..n` with arity in
/// `min_arity..=max_arity`.
#[derive(Clone, Debug)]
pub struct Tuples {
    n: usize,
    max_arity: usize,
    cur: Vec<usize>,
    started: bool,
    done: bool,
}

impl Tuples {
    pub fn new(n: usize, min_arity: usize, max_arity: usize) -> Self {
        let done = min_arity > max_arity || (n == 0 && min_arity > 0);
        Tuples { n, max_arity, cur: vec![0; min_arity], started: false, done }
    }

    /// Advance and borrow the next tuple.
    pub fn next_tuple(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.cur);
        }
        // odometer step, rightmost digit fastest
        let mut i = self.cur.len();
        while i > 0 {
            i -= 1;
            self.cur[i] += 1;
            if self.cur[i] < self.n {
                return Some(&self.cur);
            }
            self.cur[i] = 0;
        }
        let next_arity = self.cur.len() + 1;
        if next_arity > self.max_arity || self.n == 0 {
            self.done = true;
            return None;
        }
        self.cur = vec![0; next_arity];
        Some(&self.cur)
    }
}

impl Iterator for Tuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        self.next_tuple().map(|t| t.to_vec())
    }
}

/// Lexicographically least `target`-element subset of `0..n` (as a strictly
/// increasing list) accepted by `extend`, found by depth-first search.
///
/// `extend(state, chosen, next)` decides whether `next` may be appended to
/// `chosen` and returns the successor state. Acceptance must be hereditary:
/// any subset of an accepted set is accepted. Under that assumption the
/// search returns the least witness in lexicographic order.
pub fn least_subset<S: Clone, F>(n: usize, target: usize, init: S, mut extend: F) -> Option<Vec<usize>>
where
    F: FnMut(&S, &[usize], usize) -> Option<S>,
{
    fn go<S: Clone, F>(
        n: usize,
        target: usize,
        state: &S,
        chosen: &mut Vec<usize>,
        extend: &mut F,
    ) -> bool
    where
        F: FnMut(&S, &[usize], usize) -> Option<S>,
    {
        if chosen.len() == target {
            return true;
        }
        let start = chosen.last().map_or(0, |&l| l + 1);
        let remaining = target - chosen.len();
        for next in start..n {
            if n - next < remaining {
                break;
            }
            if let Some(s) = extend(state, chosen, next) {
                chosen.push(next);
                if go(n, target, &s, chosen, extend) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if target > n {
        return None;
    }
    let mut chosen = Vec::with_capacity(target);
    go(n, target, &init, &mut chosen, &mut extend).then_some(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_by_arity_then_lex() {
        let all: Vec<_> = Tuples::new(2, 1, 2).collect();
        assert_eq!(all, vec![vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(Tuples::new(3, 0, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(Tuples::new(0, 1, 3).count(), 0);
        assert_eq!(Tuples::new(4, 1, 3).count(), 4 + 16 + 64);
    }

    #[test]
    fn least_subset_is_lex_least() {
        // subsets of evens only
        let got = least_subset(10, 3, (), |_, _, x| (x % 2 == 0).then_some(()));
        assert_eq!(got, Some(vec![0, 2, 4]));
        assert_eq!(least_subset(3, 4, (), |_, _, _| Some(())), None);
        assert_eq!(least_subset(5, 0, (), |_, _, _| None::<()>), Some(vec![]));
    }
}
