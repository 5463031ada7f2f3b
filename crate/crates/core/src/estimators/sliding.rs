use std::collections::VecDeque;

/// Maxima of every length-`window` window of `xs`, in window order.
///
/// Monotone deque of indices: values along the deque are non-increasing, so
/// the front is always the current window's maximum.
pub fn sliding_maxima(xs: &[f64], window: usize) -> Vec<f64> {
    if window == 0 || window > xs.len() {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(xs.len() - window + 1);
    let mut deque: VecDeque<usize> = VecDeque::with_capacity(window);
    for (i, &x) in xs.iter().enumerate() {
        while deque.back().is_some_and(|&j| xs[j] <= x) {
            deque.pop_back();
        }
        deque.push_back(i);
        if deque.front().is_some_and(|&j| j + window <= i) {
            deque.pop_front();
        }
        if i + 1 >= window {
            out.push(xs[*deque.front().expect("window is non-empty")]);
        }
    }
    out
}

/// Maxima of the `floor(n / block)` consecutive disjoint blocks, starting at
/// the front and dropping the trailing remainder.
pub fn disjoint_maxima(xs: &[f64], block: usize) -> Vec<f64> {
    if block == 0 {
        return Vec::new();
    }
    xs.chunks_exact(block)
        .map(|c| c.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(
            sliding_maxima(&[1.0, 5.0, 2.0, 3.0], 2),
            vec![5.0, 5.0, 3.0]
        );
        assert_eq!(sliding_maxima(&[1.0, 2.0, 3.0], 3), vec![3.0]);
        assert!(sliding_maxima(&[1.0, 2.0], 3).is_empty());
        assert_eq!(disjoint_maxima(&[1.0, 5.0, 2.0, 3.0], 2), vec![5.0, 3.0]);
        assert_eq!(
            disjoint_maxima(&[1.0, 5.0, 2.0, 3.0, 9.0], 2),
            vec![5.0, 3.0]
        );
    }

    #[test]
    fn increasing_input_gives_right_endpoints() {
        let xs: Vec<f64> = (0..20).map(f64::from).collect();
        assert_eq!(sliding_maxima(&xs, 2), xs[1..].to_vec());
    }

    proptest! {
        #[test]
        fn deque_matches_brute_force(xs in prop::collection::vec(-100i32..100, 1..200), w in 1usize..20) {
            let xs: Vec<f64> = xs.into_iter().map(f64::from).collect();
            let brute: Vec<f64> = if w > xs.len() {
                Vec::new()
            } else {
                xs.windows(w).map(|s| s.iter().copied().fold(f64::NEG_INFINITY, f64::max)).collect()
            };
            prop_assert_eq!(sliding_maxima(&xs, w), brute);
        }
    }
}
