//! Gram-matrix access for the correlation recursion
//! `<r', a_i> = <r, a_i> - b <a_p, a_i>` used by the greedy decoders.

use std::ops::Range;
use std::sync::Arc;

use rayon::prelude::*;

use super::Dictionary;
use crate::error::{Error, Result};
use crate::C64;

/// Default column limit for materializing a dense complex Gram matrix.
pub const DEFAULT_DENSE_GRAM_LIMIT: usize = 4096;

/// Row access to `G[p][q] = <a_p, a_q>`.
pub trait GramRows: Send + Sync {
    fn n_cols(&self) -> usize;

    fn entry(&self, p: usize, q: usize) -> C64;

    /// `c[i] -= coeff * <a_p, a_i>` for every `i` in `ranges`.
    fn subtract_row(&self, p: usize, coeff: C64, ranges: &[Range<usize>], c: &mut [C64]) {
        for range in ranges {
            for i in range.clone() {
                c[i] -= coeff * self.entry(p, i);
            }
        }
    }
}

/// Fully materialized Gram matrix, row-major.
#[derive(Debug, Clone)]
pub struct DenseGram {
    l: usize,
    entries: Vec<C64>,
}

impl DenseGram {
    pub fn row(&self, p: usize) -> &[C64] {
        &self.entries[p * self.l..(p + 1) * self.l]
    }
}

impl GramRows for DenseGram {
    fn n_cols(&self) -> usize {
        self.l
    }

    fn entry(&self, p: usize, q: usize) -> C64 {
        self.entries[p * self.l + q]
    }

    fn subtract_row(&self, p: usize, coeff: C64, ranges: &[Range<usize>], c: &mut [C64]) {
        let row = self.row(p);
        for range in ranges {
            for (ci, g) in c[range.clone()].iter_mut().zip(&row[range.clone()]) {
                *ci -= coeff * g;
            }
        }
    }
}

/// Dense `L x L` Gram matrix, refused when `L > limit`.
pub fn gram(d: &Dictionary, limit: usize) -> Result<DenseGram> {
    let l = d.n_cols();
    if l > limit {
        return Err(Error::GramTooLarge { cols: l, limit });
    }
    let mut entries = vec![C64::new(0.0, 0.0); l * l];
    entries.par_chunks_mut(l).enumerate().for_each(|(p, row)| {
        for (q, g) in row.iter_mut().enumerate() {
            *g = d.inner(p, q);
        }
    });
    Ok(DenseGram { l, entries })
}

/// Row `p` of the Gram matrix computed directly from the columns.
pub fn gram_row(d: &Dictionary, p: usize) -> Vec<C64> {
    (0..d.n_cols()).map(|q| d.inner(p, q)).collect()
}

/// Gram rows recomputed on demand from the dictionary columns.
#[derive(Debug, Clone)]
pub struct StreamingGram {
    dict: Arc<Dictionary>,
}

impl StreamingGram {
    pub fn new(dict: Arc<Dictionary>) -> Self {
        StreamingGram { dict }
    }
}

impl GramRows for StreamingGram {
    fn n_cols(&self) -> usize {
        self.dict.n_cols()
    }

    fn entry(&self, p: usize, q: usize) -> C64 {
        self.dict.inner(p, q)
    }
}

/// Exact Gram cache for Gold and MUB dictionaries.
///
/// Off-diagonal entries between structured columns are `g / N` with `g` a
/// Gaussian integer, stored as `i8` planes (the diagonal is implicit). Column
/// phases and the optional `e_1` column are applied on the fly.
#[derive(Debug, Clone)]
pub struct QuantizedGram {
    l: usize,
    code_cols: usize,
    scale: f64,
    re: Vec<i8>,
    im: Option<Vec<i8>>,
    phases: Option<Vec<C64>>,
    identity: bool,
    first_row: Vec<C64>,
}

impl QuantizedGram {
    /// Bytes needed to cache `d`, or `None` when `d` has no integer structure.
    pub fn memory_bytes(d: &Dictionary) -> Option<usize> {
        let code = d.codes()?;
        let planes = if code.exps().iter().any(|e| e & 1 == 1) { 2 } else { 1 };
        Some(code.cols() * code.cols() * planes)
    }

    pub fn new(d: &Dictionary) -> Result<Self> {
        let code = d.codes().ok_or_else(|| Error::InvalidArgument("dictionary has no integer structure".into()))?;
        let cc = code.cols();
        let complex = code.exps().iter().any(|e| e & 1 == 1);
        let overflow = Error::InvalidArgument("Gram entries do not fit in i8".into());

        let mut re = vec![0i8; cc * cc];
        let mut im = if complex { vec![0i8; cc * cc] } else { Vec::new() };
        let fill = |p: usize, re_row: &mut [i8], im_row: Option<&mut [i8]>| -> bool {
            let mut im_row = im_row;
            for q in 0..cc {
                if q == p {
                    continue;
                }
                let (a, b) = code.correlation(p, q);
                let (Ok(a), Ok(b)) = (i8::try_from(a), i8::try_from(b)) else {
                    return false;
                };
                re_row[q] = a;
                if let Some(row) = im_row.as_deref_mut() {
                    row[q] = b;
                }
            }
            true
        };
        let ok = if complex {
            re.par_chunks_mut(cc).zip(im.par_chunks_mut(cc)).enumerate().all(|(p, (r, i))| fill(p, r, Some(i)))
        } else {
            re.par_chunks_mut(cc).enumerate().all(|(p, r)| fill(p, r, None))
        };
        if !ok {
            return Err(overflow);
        }
        Ok(QuantizedGram {
            l: d.n_cols(),
            code_cols: cc,
            scale: 1.0 / d.n_rows() as f64,
            re,
            im: complex.then_some(im),
            phases: d.phases().map(<[C64]>::to_vec),
            identity: d.has_identity_column(),
            first_row: (0..d.n_cols()).map(|q| d.entry(0, q)).collect(),
        })
    }

    #[inline]
    fn code_entry(&self, p: usize, q: usize) -> C64 {
        if p == q {
            return C64::new(1.0, 0.0);
        }
        let k = p * self.code_cols + q;
        let g = C64::new(self.re[k] as f64, self.im.as_ref().map_or(0.0, |im| im[k] as f64)) * self.scale;
        match &self.phases {
            Some(ph) => ph[p] * ph[q].conj() * g,
            None => g,
        }
    }
}

impl GramRows for QuantizedGram {
    fn n_cols(&self) -> usize {
        self.l
    }

    fn entry(&self, p: usize, q: usize) -> C64 {
        let e1 = self.code_cols;
        match (self.identity && p == e1, self.identity && q == e1) {
            (true, true) => C64::new(1.0, 0.0),
            (true, false) => self.first_row[q].conj(),
            (false, true) => self.first_row[p],
            (false, false) => self.code_entry(p, q),
        }
    }

    fn subtract_row(&self, p: usize, coeff: C64, ranges: &[Range<usize>], c: &mut [C64]) {
        let cc = self.code_cols;
        if self.identity && p == cc {
            for range in ranges {
                for i in range.clone() {
                    c[i] -= coeff * self.entry(p, i);
                }
            }
            return;
        }
        let row_re = &self.re[p * cc..(p + 1) * cc];
        let row_im = self.im.as_ref().map(|im| &im[p * cc..(p + 1) * cc]);
        for range in ranges {
            let code_range = range.start.min(cc)..range.end.min(cc);
            match (&self.phases, row_im) {
                (None, None) => {
                    let f = coeff * self.scale;
                    for (ci, &g) in c[code_range.clone()].iter_mut().zip(&row_re[code_range.clone()]) {
                        *ci -= f * g as f64;
                    }
                }
                (None, Some(row_im)) => {
                    let f = coeff * self.scale;
                    for ((ci, &gr), &gi) in c[code_range.clone()]
                        .iter_mut()
                        .zip(&row_re[code_range.clone()])
                        .zip(&row_im[code_range.clone()])
                    {
                        *ci -= f * C64::new(gr as f64, gi as f64);
                    }
                }
                (Some(ph), _) => {
                    let f = coeff * ph[p] * self.scale;
                    for i in code_range.clone() {
                        let g = C64::new(row_re[i] as f64, row_im.map_or(0.0, |im| im[i] as f64));
                        c[i] -= f * ph[i].conj() * g;
                    }
                }
            }
            if code_range.contains(&p) {
                c[p] -= coeff;
            }
            if self.identity && range.contains(&cc) {
                c[cc] -= coeff * self.first_row[p];
            }
        }
    }
}

/// Picks the cheapest exact Gram source for `d` within `budget_bytes`:
/// the integer cache, then a dense matrix, then streaming rows.
pub fn auto_gram(d: &Arc<Dictionary>, budget_bytes: usize) -> Arc<dyn GramRows> {
    if QuantizedGram::memory_bytes(d).is_some_and(|b| b <= budget_bytes) {
        if let Ok(g) = QuantizedGram::new(d) {
            return Arc::new(g);
        }
    }
    let l = d.n_cols();
    if l <= DEFAULT_DENSE_GRAM_LIMIT && l * l * std::mem::size_of::<C64>() <= budget_bytes {
        if let Ok(g) = gram(d, DEFAULT_DENSE_GRAM_LIMIT) {
            return Arc::new(g);
        }
    }
    Arc::new(StreamingGram::new(d.clone()))
}
