use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Multi-index bookkeeping shared by every jet of a given (dim, order).
///
/// Tables are immutable once built and cached process-wide.
#[derive(Debug)]
pub struct Layout {
    dim: usize,
    order: usize,
    exps: Vec<[u8; 4]>,
    index: HashMap<[u8; 4], usize>,
    mul: Vec<(u16, u16, u16)>,
    deriv: Vec<Vec<(u16, u16, f64)>>,
    lower: Option<Arc<Layout>>,
}

impl PartialEq for Layout {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.order == other.order
    }
}

type Cache = Mutex<HashMap<(usize, usize), Arc<Layout>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Layout {
    pub fn get(dim: usize, order: usize) -> Arc<Layout> {
        assert!((1..=4).contains(&dim), "jets support 1 to 4 variables");
        assert!(order <= 12, "jet order {order} too large");
        if let Some(l) = cache().lock().unwrap().get(&(dim, order)) {
            return l.clone();
        }
        let lower = if order > 0 {
            Some(Layout::get(dim, order - 1))
        } else {
            None
        };
        let built = Arc::new(Layout::build(dim, order, lower));
        cache()
            .lock()
            .unwrap()
            .entry((dim, order))
            .or_insert(built)
            .clone()
    }

    fn build(dim: usize, order: usize, lower: Option<Arc<Layout>>) -> Layout {
        let mut exps = Vec::new();
        for deg in 0..=order {
            let mut cur = [0u8; 4];
            push_degree(dim, 0, deg, &mut cur, &mut exps);
        }
        let index: HashMap<[u8; 4], usize> =
            exps.iter().enumerate().map(|(i, e)| (*e, i)).collect();

        let mut mul = Vec::new();
        for (i, a) in exps.iter().enumerate() {
            let da: usize = a.iter().map(|&v| v as usize).sum();
            for (j, b) in exps.iter().enumerate() {
                let db: usize = b.iter().map(|&v| v as usize).sum();
                if da + db > order {
                    continue;
                }
                let mut s = [0u8; 4];
                for v in 0..4 {
                    s[v] = a[v] + b[v];
                }
                mul.push((i as u16, j as u16, index[&s] as u16));
            }
        }

        let mut deriv = vec![Vec::new(); dim];
        if order > 0 {
            for (dst, a) in exps.iter().enumerate() {
                let deg: usize = a.iter().map(|&v| v as usize).sum();
                if deg >= order {
                    continue;
                }
                for (v, table) in deriv.iter_mut().enumerate() {
                    let mut up = *a;
                    up[v] += 1;
                    table.push((index[&up] as u16, dst as u16, up[v] as f64));
                }
            }
        }

        Layout {
            dim,
            order,
            exps,
            index,
            mul,
            deriv,
            lower,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// Multi-indices in storage order.
    pub fn exponents(&self) -> impl Iterator<Item = &[u8]> {
        self.exps.iter().map(move |e| &e[..self.dim])
    }

    pub fn index_of(&self, alpha: &[u8]) -> Option<usize> {
        if alpha.len() != self.dim {
            return None;
        }
        let mut key = [0u8; 4];
        key[..self.dim].copy_from_slice(alpha);
        self.index.get(&key).copied()
    }

    pub(crate) fn mul_table(&self) -> &[(u16, u16, u16)] {
        &self.mul
    }

    pub(crate) fn derivative_table(&self, v: usize) -> &[(u16, u16, f64)] {
        &self.deriv[v]
    }

    pub(crate) fn lower(&self) -> Arc<Layout> {
        self.lower.clone().expect("order-0 layout has no lower layout")
    }
}

fn push_degree(dim: usize, var: usize, left: usize, cur: &mut [u8; 4], out: &mut Vec<[u8; 4]>) {
    if var == dim - 1 {
        cur[var] = left as u8;
        out.push(*cur);
        cur[var] = 0;
        return;
    }
    for k in (0..=left).rev() {
        cur[var] = k as u8;
        push_degree(dim, var + 1, left - k, cur, out);
    }
    cur[var] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn sizes_match_binomials() {
        for dim in 1..=4 {
            for order in 0..=8 {
                assert_eq!(Layout::get(dim, order).len(), binom(dim + order, order));
            }
        }
    }

    #[test]
    fn lower_orders_are_prefixes() {
        let hi = Layout::get(4, 6);
        let lo = Layout::get(4, 4);
        for (a, b) in lo.exponents().zip(hi.exponents()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn graded_lex_start() {
        let l = Layout::get(3, 2);
        let e: Vec<Vec<u8>> = l.exponents().map(|e| e.to_vec()).collect();
        assert_eq!(e[0], vec![0, 0, 0]);
        assert_eq!(e[1], vec![1, 0, 0]);
        assert_eq!(e[2], vec![0, 1, 0]);
        assert_eq!(e[3], vec![0, 0, 1]);
        assert_eq!(e[4], vec![2, 0, 0]);
    }
}
