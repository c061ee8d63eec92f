//! Dense GF(2) linear algebra on bit-packed rows.

/// A dense binary matrix with rows packed into `u64` words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        Self {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.words + c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        if value {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (s, d) = (src * self.words, dst * self.words);
        for k in 0..self.words {
            let v = self.data[s + k];
            self.data[d + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words {
            self.data.swap(a * self.words + k, b * self.words + k);
        }
    }

    /// Product with a bit vector: returns `self · v` over GF(2).
    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols);
        let packed = pack_bits(v);
        (0..self.rows)
            .map(|r| {
                let ones: u32 = self
                    .row(r)
                    .iter()
                    .zip(&packed)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum();
                (ones & 1) as u8
            })
            .collect()
    }
}

pub fn pack_bits(bits: &[u8]) -> Vec<u64> {
    let mut out = vec![0u64; bits.len().div_ceil(64)];
    for (i, &b) in bits.iter().enumerate() {
        if b & 1 == 1 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

pub fn unpack_bits(words: &[u64], len: usize) -> Vec<u8> {
    (0..len).map(|i| ((words[i / 64] >> (i % 64)) & 1) as u8).collect()
}

/// Outcome of reducing a parity-check matrix to row-echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystematicForm {
    pub rank: usize,
    /// Pivot column of each independent row, ascending.
    pub pivot_cols: Vec<usize>,
    /// Free columns; these carry the message bits.
    pub message_cols: Vec<usize>,
    /// One packed codeword per message column: the unit message at that
    /// column with parity columns filled in.
    pub generator: Vec<Vec<u64>>,
}

/// Gauss-Jordan elimination over GF(2) with column pivoting.
pub fn systematic_form(h: &BitMatrix) -> SystematicForm {
    let mut m = h.clone();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| m.get(r, col)) else {
            continue;
        };
        m.swap_rows(p, row);
        for r in 0..m.rows {
            if r != row && m.get(r, col) {
                m.xor_row_into(row, r);
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    let rank = pivot_cols.len();
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    let message_cols: Vec<usize> = (0..m.cols).filter(|&c| !is_pivot[c]).collect();
    // In reduced form each pivot bit equals the sum of the free bits in its row.
    let generator = message_cols
        .iter()
        .map(|&f| {
            let mut cw = vec![0u64; m.words];
            cw[f / 64] |= 1 << (f % 64);
            for (r, &p) in pivot_cols.iter().enumerate() {
                if m.get(r, f) {
                    cw[p / 64] |= 1 << (p % 64);
                }
            }
            cw
        })
        .collect();
    SystematicForm {
        rank,
        pivot_cols,
        message_cols,
        generator,
    }
}
