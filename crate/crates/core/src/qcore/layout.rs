use std::fmt;

use super::QError;

/// A named subsystem with its local Hilbert-space dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Register {
    pub label: String,
    pub dim: usize,
}

/// Ordered list of labeled registers. The first register is the most
/// significant digit of the mixed-radix basis index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RegisterLayout {
    regs: Vec<Register>,
}

impl RegisterLayout {
    pub fn new<S: Into<String>>(regs: impl IntoIterator<Item = (S, usize)>) -> Result<Self, QError> {
        let regs: Vec<Register> = regs
            .into_iter()
            .map(|(label, dim)| Register { label: label.into(), dim })
            .collect();
        for (i, r) in regs.iter().enumerate() {
            if r.dim == 0 {
                return Err(QError::InvalidLayout(format!("register `{}` has dimension 0", r.label)));
            }
            if regs[..i].iter().any(|q| q.label == r.label) {
                return Err(QError::LabelClash(r.label.clone()));
            }
        }
        Ok(RegisterLayout { regs })
    }

    /// Layout of qubits with the given labels.
    pub fn qubits<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self, QError> {
        Self::new(labels.into_iter().map(|l| (l, 2)))
    }

    pub fn qubit(label: impl Into<String>) -> Self {
        RegisterLayout { regs: vec![Register { label: label.into(), dim: 2 }] }
    }

    pub fn registers(&self) -> &[Register] {
        &self.regs
    }

    pub fn len(&self) -> usize {
        self.regs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regs.is_empty()
    }

    /// Total dimension (1 for the empty layout).
    pub fn dim(&self) -> usize {
        self.regs.iter().map(|r| r.dim).product()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.regs.iter().map(|r| r.label.as_str())
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.regs.iter().position(|r| r.label == label)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.position(label).is_some()
    }

    /// Stride of each register in the flat basis index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.regs.len()];
        for i in (0..self.regs.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.regs[i + 1].dim;
        }
        strides
    }

    /// Mixed-radix digits of a flat basis index.
    pub fn digits(&self, index: usize) -> Vec<usize> {
        self.strides()
            .iter()
            .zip(&self.regs)
            .map(|(s, r)| (index / s) % r.dim)
            .collect()
    }

    /// `self` followed by `other`; fails on a shared label.
    pub fn concat(&self, other: &RegisterLayout) -> Result<RegisterLayout, QError> {
        if let Some(r) = other.regs.iter().find(|r| self.contains(&r.label)) {
            return Err(QError::LabelClash(r.label.clone()));
        }
        let mut regs = self.regs.clone();
        regs.extend(other.regs.iter().cloned());
        Ok(RegisterLayout { regs })
    }

    /// `self` followed by the registers of `other` not already present.
    pub fn union(&self, other: &RegisterLayout) -> Result<RegisterLayout, QError> {
        let mut regs = self.regs.clone();
        for r in &other.regs {
            match self.position(&r.label) {
                Some(p) if self.regs[p].dim != r.dim => {
                    return Err(QError::LayoutMismatch(format!(
                        "register `{}` has dimension {} and {}",
                        r.label, self.regs[p].dim, r.dim
                    )))
                }
                Some(_) => {}
                None => regs.push(r.clone()),
            }
        }
        Ok(RegisterLayout { regs })
    }

    /// Sub-layout of the named registers, kept in the order they appear in `self`.
    pub fn restrict<'a>(&self, keep: impl IntoIterator<Item = &'a str>) -> Result<RegisterLayout, QError> {
        let keep: Vec<&str> = keep.into_iter().collect();
        if let Some(missing) = keep.iter().find(|l| !self.contains(l)) {
            return Err(QError::UnknownLabel((*missing).to_string()));
        }
        Ok(RegisterLayout {
            regs: self.regs.iter().filter(|r| keep.contains(&r.label.as_str())).cloned().collect(),
        })
    }

    /// True when every register of `sub` is present here with the same dimension.
    pub fn embeds(&self, sub: &RegisterLayout) -> bool {
        sub.regs
            .iter()
            .all(|r| self.position(&r.label).is_some_and(|p| self.regs[p].dim == r.dim))
    }

    pub fn is_disjoint(&self, other: &RegisterLayout) -> bool {
        !other.regs.iter().any(|r| self.contains(&r.label))
    }
}

impl fmt::Display for RegisterLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.regs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", r.label, r.dim)?;
        }
        write!(f, "]")
    }
}

/// Index bookkeeping for a sub-layout sitting inside a larger layout.
///
/// Every flat index `i` of the full space splits uniquely as
/// `i = base + offsets[local]`, where `local` is the index inside the sub-layout
/// and `base` has zero digits on the sub-layout's registers.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub offsets: Vec<usize>,
    /// `(full stride, dim, local stride)` for each sub-layout register.
    digits: Vec<(usize, usize, usize)>,
    pub full_dim: usize,
}

impl Embedding {
    pub fn new(full: &RegisterLayout, sub: &RegisterLayout) -> Result<Self, QError> {
        if !full.embeds(sub) {
            return Err(QError::LayoutMismatch(format!("{sub} is not contained in {full}")));
        }
        let full_strides = full.strides();
        let sub_strides = sub.strides();
        let digits: Vec<(usize, usize, usize)> = sub
            .registers()
            .iter()
            .zip(&sub_strides)
            .map(|(r, &ls)| {
                let p = full.position(&r.label).expect("checked by embeds");
                (full_strides[p], r.dim, ls)
            })
            .collect();
        let offsets = (0..sub.dim())
            .map(|local| digits.iter().map(|&(fs, d, ls)| ((local / ls) % d) * fs).sum())
            .collect();
        Ok(Embedding { offsets, digits, full_dim: full.dim() })
    }

    pub fn local_dim(&self) -> usize {
        self.offsets.len()
    }

    /// Splits a full index into `(local, base)`.
    #[inline]
    pub fn split(&self, index: usize) -> (usize, usize) {
        let mut local = 0;
        let mut off = 0;
        for &(fs, d, ls) in &self.digits {
            let digit = (index / fs) % d;
            local += digit * ls;
            off += digit * fs;
        }
        (local, index - off)
    }

    /// Full indices whose sub-layout digits are all zero, in increasing order.
    pub fn bases(&self) -> Vec<usize> {
        (0..self.full_dim).filter(|&i| self.split(i).0 == 0).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_labels_and_zero_dims() {
        assert!(matches!(RegisterLayout::qubits(["a", "a"]), Err(QError::LabelClash(_))));
        assert!(matches!(RegisterLayout::new([("a", 0)]), Err(QError::InvalidLayout(_))));
        assert_eq!(RegisterLayout::default().dim(), 1);
    }

    #[test]
    fn strides_are_big_endian() {
        let l = RegisterLayout::new([("a", 2), ("b", 3), ("c", 2)]).unwrap();
        assert_eq!(l.strides(), vec![6, 2, 1]);
        assert_eq!(l.digits(11), vec![1, 2, 1]);
    }

    #[test]
    fn embedding_splits_indices() {
        let full = RegisterLayout::qubits(["a", "b", "c"]).unwrap();
        let sub = RegisterLayout::qubits(["c", "a"]).unwrap();
        let e = Embedding::new(&full, &sub).unwrap();
        // local index of sub (c, a): c is the high digit
        assert_eq!(e.offsets, vec![0, 4, 1, 5]);
        for i in 0..8 {
            let (local, base) = e.split(i);
            assert_eq!(base + e.offsets[local], i);
            assert_eq!(base & 0b101, 0);
        }
        assert_eq!(e.bases(), vec![0, 2]);
    }
}
