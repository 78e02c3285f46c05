use std::collections::VecDeque;

use num_traits::Zero;

use super::{Block, NakedPoly};
use crate::error::Error;
use crate::exponents::Surinteger;
use crate::ratpoly::Q;

/// Lazily enumerates the nonzero coordinates of a polynomial in strictly
/// decreasing exponent order.
///
/// A block with an infinite tail never finishes, so only the first ω entries
/// of the coordinate sequence are reachable.
#[derive(Clone, Debug)]
pub struct TermCursor {
    source: NakedPoly,
    blocks: Vec<(Surinteger, Block)>,
    block_idx: usize,
    index: usize,
    // last `deg den` series values of the current block, newest at the back
    window: VecDeque<Q>,
    yielded: Vec<(Surinteger, Q)>,
}

impl TermCursor {
    pub(super) fn new(p: &NakedPoly) -> Self {
        TermCursor {
            source: p.clone(),
            blocks: p.blocks().map(|(h, b)| (h.clone(), b.clone())).collect(),
            block_idx: 0,
            index: 0,
            window: VecDeque::new(),
            yielded: Vec::new(),
        }
    }

    /// The polynomial the cursor walks.
    pub fn source(&self) -> &NakedPoly {
        &self.source
    }

    pub(super) fn into_remaining(self) -> Result<NakedPoly, Error> {
        if self.yielded.is_empty() {
            return Ok(self.source);
        }
        let consumed = NakedPoly::from_terms(&self.yielded)?;
        self.source.sub(&consumed)
    }

    fn next_coeff(&mut self) -> Option<(Surinteger, Q)> {
        let (head, block) = self.blocks.get(self.block_idx)?;
        let den = block.denominator().coeffs();
        if block.is_finite() && self.index >= block.numerator().len() {
            self.block_idx += 1;
            self.index = 0;
            self.window.clear();
            return self.next_coeff();
        }
        let j = self.index;
        let mut v = block.numerator().coeff(j);
        for (i, d) in den.iter().enumerate().skip(1) {
            if i > j {
                break;
            }
            if !d.is_zero() {
                v -= d * &self.window[self.window.len() - i];
            }
        }
        let exp = head.add_int(&(block.top() - j));
        if den.len() > 1 {
            self.window.push_back(v.clone());
            if self.window.len() > den.len() - 1 {
                self.window.pop_front();
            }
        }
        self.index += 1;
        Some((exp, v))
    }
}

impl Iterator for TermCursor {
    type Item = (Surinteger, Q);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let (e, c) = self.next_coeff()?;
            if !c.is_zero() {
                self.yielded.push((e.clone(), c.clone()));
                return Some((e, c));
            }
        }
    }
}
