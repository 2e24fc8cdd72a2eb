use std::ops::Range;

use super::{residual_norm, DecodeOutput, Decoder, Iteration, SymbolTable};
use crate::codec::SparseMessage;
use crate::dictionary::SplitSignal;
use crate::error::{invalid, Result};
use crate::C64;

/// Best (column, symbol) over `ranges` with the runner-up column's metric.
///
/// Detected columns hold NaN correlations, which never compare greater.
fn argmax(c: &[C64], ranges: &[Range<usize>], table: &SymbolTable) -> Option<Iteration> {
    let (mut best, mut second) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut pick = None;
    for range in ranges {
        for i in range.clone() {
            let (p, m) = table.best(c[i]);
            if p > best {
                second = best;
                best = p;
                pick = Some((i, m));
            } else if p > second {
                second = p;
            }
        }
    }
    pick.map(|(column, symbol)| Iteration { column, symbol, score: best, margin: best - second })
}

impl Decoder {
    /// Correlations `<y, a_i>` over the initial candidate columns.
    fn initial_correlations(&self, y: &SplitSignal) -> Vec<C64> {
        let d = self.spec.dictionary();
        let mut c = vec![C64::new(0.0, 0.0); d.n_cols()];
        for range in self.candidate_ranges() {
            d.correlate_split(y, range, &mut c);
        }
        c
    }

    /// Match and decode, continuing from the `partial` message.
    pub fn mad(&self, y: &[C64], partial: &SparseMessage) -> Result<DecodeOutput> {
        let split = SplitSignal::new(y);
        let c0 = self.initial_correlations(&split);
        let (message, trace) = self.mad_from(y, &c0, partial)?;
        let distance = residual_norm(y, &self.spec.synthesize(&message));
        Ok(DecodeOutput { message, trace, distance, path: None, degenerate: false })
    }

    /// Core of MAD. `c0` holds `<y, a_i>` on the candidate columns.
    fn mad_from(&self, y: &[C64], c0: &[C64], partial: &SparseMessage) -> Result<(SparseMessage, Vec<Iteration>)> {
        let d = self.spec.dictionary();
        let constellation = self.spec.constellation();
        let table = SymbolTable::new(constellation.symbols());
        let k = self.cfg.k;
        if partial.k() > k {
            return Err(invalid(format!("partial message has {} entries, K = {k}", partial.k())));
        }
        partial.validate(d.n_cols(), constellation.len())?;

        let mut ranges = self.candidate_ranges();
        for &col in &partial.support {
            self.discard(&mut ranges, col)?;
        }
        let mut msg = partial.clone();
        let mut trace = Vec::with_capacity(k);
        let mut c = c0.to_vec();
        let mut r = Vec::new();
        match &self.gram {
            Some(g) => {
                for (&col, &sym) in partial.support.iter().zip(&partial.symbols) {
                    g.subtract_row(col, constellation.symbol(sym), &ranges, &mut c);
                }
            }
            None => {
                r = y.to_vec();
                for (&col, &sym) in partial.support.iter().zip(&partial.symbols) {
                    d.axpy(-constellation.symbol(sym), col, &mut r);
                }
                if partial.k() > 0 {
                    self.correlate_residual(&r, &ranges, &mut c);
                }
            }
        }
        for &col in &msg.support {
            c[col] = C64::new(f64::NAN, f64::NAN);
        }

        while msg.k() < k {
            let it = argmax(&c, &ranges, &table).ok_or_else(|| invalid("no candidate columns left"))?;
            msg.support.push(it.column);
            msg.symbols.push(it.symbol);
            trace.push(it);
            if msg.k() == k {
                break;
            }
            self.discard(&mut ranges, it.column)?;
            let b = constellation.symbol(it.symbol);
            match &self.gram {
                Some(g) => g.subtract_row(it.column, b, &ranges, &mut c),
                None => {
                    d.axpy(-b, it.column, &mut r);
                    self.correlate_residual(&r, &ranges, &mut c);
                    for &col in &msg.support {
                        c[col] = C64::new(f64::NAN, f64::NAN);
                    }
                }
            }
            c[it.column] = C64::new(f64::NAN, f64::NAN);
        }
        Ok((msg, trace))
    }

    fn correlate_residual(&self, r: &[C64], ranges: &[Range<usize>], c: &mut [C64]) {
        let split = SplitSignal::new(r);
        for range in ranges {
            self.spec.dictionary().correlate_split(&split, range.clone(), c);
        }
    }

    /// Drops the subblock holding `col` when subblock discard is on.
    pub(crate) fn discard(&self, ranges: &mut Vec<Range<usize>>, col: usize) -> Result<()> {
        if self.cfg.subblock_discard {
            let before = ranges.len();
            ranges.retain(|r| !r.contains(&col));
            if ranges.len() == before {
                return Err(invalid(format!("column {col} is not in an open subblock")));
            }
        }
        Ok(())
    }

    /// Parallel MAD: `T` distinct first-iteration columns, one MAD run each,
    /// keep the estimate closest to `y`.
    pub fn parallel_mad(&self, y: &[C64]) -> Result<DecodeOutput> {
        let table = SymbolTable::new(self.spec.constellation().symbols());
        let split = SplitSignal::new(y);
        let c0 = self.initial_correlations(&split);
        let ranges = self.candidate_ranges();

        let mut scores = vec![f64::NAN; c0.len()];
        let mut best_sym = vec![0; c0.len()];
        for range in &ranges {
            for i in range.clone() {
                (scores[i], best_sym[i]) = table.best(c0[i]);
            }
        }
        let t = self.cfg.parallel_paths;
        let mut seeds: Vec<(usize, f64)> = Vec::with_capacity(t);
        for _ in 0..t {
            let mut pick: Option<(usize, f64)> = None;
            for range in &ranges {
                for i in range.clone() {
                    if scores[i] > pick.map_or(f64::NEG_INFINITY, |p| p.1) {
                        pick = Some((i, scores[i]));
                    }
                }
            }
            let Some(p) = pick else {
                return Err(invalid(format!("T = {t} exceeds the available columns")));
            };
            scores[p.0] = f64::NAN;
            seeds.push(p);
        }
        let top = seeds[0].1;
        let runner_up = match seeds.get(1) {
            Some(s) => s.1,
            None => ranges.iter().flat_map(|r| r.clone()).map(|i| scores[i]).fold(f64::NEG_INFINITY, |a, b| {
                if b > a {
                    b
                } else {
                    a
                }
            }),
        };

        let mut best: Option<DecodeOutput> = None;
        for (n, &(col, score)) in seeds.iter().enumerate() {
            let seed = SparseMessage { support: vec![col], symbols: vec![best_sym[col]] };
            let (message, mut rest) = self.mad_from(y, &c0, &seed)?;
            let margin = if n == 0 { top - runner_up } else { score - top };
            let mut trace = vec![Iteration { column: col, symbol: best_sym[col], score, margin }];
            trace.append(&mut rest);
            let distance = residual_norm(y, &self.spec.synthesize(&message));
            if best.as_ref().is_none_or(|b| distance < b.distance) {
                best = Some(DecodeOutput { message, trace, distance, path: Some(n), degenerate: false });
            }
        }
        Ok(best.expect("T >= 1"))
    }
}
