//! Graded windows: finite boxes of exponent degrees on which all graded
//! computations run exactly. Truncation is per degree and never approximate.

use crate::scalars::Exponent;

/// The box of exponent vectors with every entry in `[-radius, radius]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Window {
    pub nvars: usize,
    pub radius: i64,
}

impl Window {
    pub fn new(nvars: usize, radius: i64) -> Self {
        assert!(radius >= 0);
        Window { nvars, radius }
    }

    pub fn contains(&self, e: &Exponent) -> bool {
        e.len() == self.nvars && e.iter().all(|m| m.abs() <= self.radius)
    }

    /// Window with radius scaled by `k` (identity checks on inputs from a
    /// window land in an enlarged one).
    pub fn enlarged(&self, k: i64) -> Window {
        Window::new(self.nvars, self.radius * k)
    }

    /// All exponents of the box in lexicographic order.
    pub fn exponents(&self) -> Vec<Exponent> {
        let mut out = Vec::new();
        let mut cur = vec![-self.radius; self.nvars];
        loop {
            out.push(Exponent::new(cur.clone()));
            let mut i = self.nvars;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < self.radius {
                    cur[i] += 1;
                    for v in cur.iter_mut().skip(i + 1) {
                        *v = -self.radius;
                    }
                    break;
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        (2 * self.radius as usize + 1).pow(self.nvars as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_enumeration_is_lexicographic_and_complete() {
        let w = Window::new(2, 1);
        let exps = w.exponents();
        assert_eq!(exps.len(), 9);
        assert_eq!(w.size(), 9);
        assert!(exps.windows(2).all(|p| p[0] < p[1]));
        assert!(exps.iter().all(|e| w.contains(e)));
        assert!(!w.contains(&Exponent::new(vec![2, 0])));
    }

    #[test]
    fn zero_variable_window_is_a_point() {
        let w = Window::new(0, 3);
        assert_eq!(w.exponents(), vec![Exponent::new(vec![])]);
    }
}
