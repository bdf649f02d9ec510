//! Colored heaps of pieces.
//!
//! An element of the locally free group on `n` generators (generators `f_i`
//! and `f_j` commute iff `|i - j| >= 2`) is stored as a heap: an `n`-column
//! strip in which every reduced letter occupies one cell. A letter `f_i^±1`
//! falls in column `i` and comes to rest one level above the highest cell in
//! columns `i - 1`, `i`, `i + 1`. In group mode a letter whose inverse sits on
//! top of column `i`, with nothing above it in the neighbouring columns,
//! cancels that cell instead.
//!
//! The heap is the canonical state: two words are equal as group elements
//! iff they build the same heap, so equality, length and roof are all read
//! off the heap.
//!
//! Besides the group and semigroup, two quotients used by the counting
//! oracle are supported: the projective semigroup (`f_i^2 = f_i`) and the
//! group of restricted order `r` (`f_i^r = 1`). In restricted mode each
//! column run of cells at consecutive levels is one syllable, stored as the
//! geodesic representative of its class mod `r`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Sign of a generator occurrence; the cell color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn inverse(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    fn key_byte(self) -> u8 {
        match self {
            Sign::Plus => 0x01,
            Sign::Minus => 0xFF,
        }
    }
}

/// A generator `f_index` or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub index: u32,
    pub sign: Sign,
}

impl Letter {
    pub fn new(index: u32, sign: Sign) -> Self {
        Letter { index, sign }
    }

    pub fn pos(index: u32) -> Self {
        Letter::new(index, Sign::Plus)
    }

    pub fn neg(index: u32) -> Self {
        Letter::new(index, Sign::Minus)
    }

    pub fn inverse(self) -> Self {
        Letter::new(self.index, self.sign.inverse())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Plus => write!(f, "f{}", self.index),
            Sign::Minus => write!(f, "f{}^-1", self.index),
        }
    }
}

/// Which group or semigroup the heap encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HeapMode {
    Group,
    Semigroup,
    /// Semigroup with `f_i^2 = f_i`.
    Projective,
    /// Group with `f_i^r = 1`, `r >= 2`.
    Restricted(u32),
}

impl HeapMode {
    pub fn name(&self) -> &'static str {
        match self {
            HeapMode::Group => "group",
            HeapMode::Semigroup => "semigroup",
            HeapMode::Projective => "projective",
            HeapMode::Restricted(_) => "restricted",
        }
    }

    /// Whether inverse letters are part of the generating set.
    pub fn has_inverses(&self) -> bool {
        matches!(self, HeapMode::Group | HeapMode::Restricted(_))
    }

    fn validate(&self) -> Result<()> {
        match *self {
            HeapMode::Restricted(r) if r < 2 => Err(invalid(format!("restricted order r = {r} must be >= 2"))),
            _ => Ok(()),
        }
    }
}

/// One cell of a heap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub level: u32,
    pub sign: Sign,
}

/// Effect of a single push on the cell count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Grew,
    Reduced,
    Unchanged,
}

/// Succession rule for normal forms: index `next` may follow
/// index `prev` iff `next = prev - 1` or `next > prev`.
pub fn may_follow(prev: u32, next: u32) -> bool {
    next + 1 == prev || next > prev
}

/// Canonical state of an element: per-column stacks of signed cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredHeap {
    n: u32,
    mode: HeapMode,
    columns: Vec<Vec<Cell>>,
    cells: usize,
}

impl ColoredHeap {
    /// The empty heap (group identity) on `n` columns.
    pub fn new(n: u32, mode: HeapMode) -> Result<Self> {
        if n == 0 {
            return Err(invalid("heap needs at least one column"));
        }
        mode.validate()?;
        Ok(ColoredHeap {
            n,
            mode,
            columns: vec![Vec::new(); n as usize],
            cells: 0,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mode(&self) -> HeapMode {
        self.mode
    }

    /// Number of cells, i.e. the reduced word length.
    pub fn len(&self) -> usize {
        self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells == 0
    }

    /// Cells of column `i` (1-based), bottom to top.
    pub fn column(&self, i: u32) -> &[Cell] {
        &self.columns[(i - 1) as usize]
    }

    /// Top level of column `i`; 0 for an empty column or an index outside `1..=n`.
    pub fn top_level(&self, i: u32) -> u32 {
        if i == 0 || i > self.n {
            return 0;
        }
        self.columns[(i - 1) as usize].last().map_or(0, |c| c.level)
    }

    /// Highest occupied level.
    pub fn height(&self) -> u32 {
        (1..=self.n).map(|i| self.top_level(i)).max().unwrap_or(0)
    }

    /// Column `i` is in the roof iff its top cell has no cell above it in
    /// columns `i - 1`, `i`, `i + 1`.
    pub fn in_roof(&self, i: u32) -> bool {
        let t = self.top_level(i);
        t > 0 && t > self.top_level(i - 1) && t > self.top_level(i + 1)
    }

    fn check_letter(&self, letter: Letter) -> Result<()> {
        if letter.index == 0 || letter.index > self.n {
            return Err(Error::IndexOutOfRange {
                index: letter.index,
                n: self.n,
            });
        }
        if letter.sign == Sign::Minus && !self.mode.has_inverses() {
            return Err(Error::InverseNotAllowed(self.mode.name()));
        }
        Ok(())
    }

    fn drop_level(&self, i: u32) -> u32 {
        1 + self
            .top_level(i - 1)
            .max(self.top_level(i))
            .max(self.top_level(i + 1))
    }

    fn place(&mut self, i: u32, sign: Sign) {
        let level = self.drop_level(i);
        self.columns[(i - 1) as usize].push(Cell { level, sign });
        self.cells += 1;
    }

    /// Right-multiplies the element by `letter` in place.
    pub fn push(&mut self, letter: Letter) -> Result<Step> {
        self.check_letter(letter)?;
        let i = letter.index;
        let roof = self.in_roof(i);
        match self.mode {
            HeapMode::Semigroup => {
                self.place(i, Sign::Plus);
                Ok(Step::Grew)
            }
            HeapMode::Projective => {
                if roof {
                    Ok(Step::Unchanged)
                } else {
                    self.place(i, Sign::Plus);
                    Ok(Step::Grew)
                }
            }
            HeapMode::Group => {
                let col = &mut self.columns[(i - 1) as usize];
                if roof && col.last().map(|c| c.sign) == Some(letter.sign.inverse()) {
                    col.pop();
                    self.cells -= 1;
                    Ok(Step::Reduced)
                } else {
                    self.place(i, letter.sign);
                    Ok(Step::Grew)
                }
            }
            HeapMode::Restricted(r) => {
                if roof {
                    Ok(self.merge_top_syllable(i, letter.sign, r))
                } else {
                    // f^-1 = f when r = 2; class r/2 is stored with a plus sign.
                    let sign = if r == 2 { Sign::Plus } else { letter.sign };
                    self.place(i, sign);
                    Ok(Step::Grew)
                }
            }
        }
    }

    /// Restricted mode: multiply the top syllable of column `i` (which is in
    /// the roof) by `f_i^±1` and rewrite it as its geodesic representative.
    fn merge_top_syllable(&mut self, i: u32, sign: Sign, r: u32) -> Step {
        let col = &mut self.columns[(i - 1) as usize];
        let mut run = 1;
        while run < col.len() && col[col.len() - run - 1].level + run as u32 == col[col.len() - 1].level {
            run += 1;
        }
        let base = col[col.len() - run].level;
        let class = (run as i64 * col[col.len() - 1].sign.as_i64() + sign.as_i64()).rem_euclid(r as i64);
        let (new_len, new_sign) = geodesic(class as u32, r);
        col.truncate(col.len() - run);
        for k in 0..new_len {
            col.push(Cell {
                level: base + k,
                sign: new_sign,
            });
        }
        self.cells = self.cells - run + new_len as usize;
        match (new_len as usize).cmp(&run) {
            std::cmp::Ordering::Greater => Step::Grew,
            std::cmp::Ordering::Less => Step::Reduced,
            std::cmp::Ordering::Equal => Step::Unchanged,
        }
    }

    /// Functional form of [`push`](Self::push).
    pub fn pushed(&self, letter: Letter) -> Result<Self> {
        let mut h = self.clone();
        h.push(letter)?;
        Ok(h)
    }

    /// The roof: columns whose top cell can be removed in one step.
    pub fn roof(&self) -> RoofSet {
        let entries: Vec<Option<Sign>> = (1..=self.n)
            .map(|i| {
                if self.in_roof(i) {
                    self.column(i).last().map(|c| c.sign)
                } else {
                    None
                }
            })
            .collect();
        let size = entries.iter().filter(|e| e.is_some()).count();
        RoofSet { entries, size }
    }

    /// Injective byte serialization.
    ///
    /// Layout: `u32` LE `n`; then for each column in ascending index a `u32`
    /// cell count followed by, per cell from the bottom, a `u32` level and a
    /// color byte (`0x01` plus, `0xFF` minus). All integers little-endian.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + 4 * self.n as usize + 5 * self.cells);
        out.extend_from_slice(&self.n.to_le_bytes());
        for col in &self.columns {
            out.extend_from_slice(&(col.len() as u32).to_le_bytes());
            for c in col {
                out.extend_from_slice(&c.level.to_le_bytes());
                out.push(c.sign.key_byte());
            }
        }
        out
    }

    /// Inverse of [`canonical_key`](Self::canonical_key). The result is
    /// checked against the heap invariants.
    pub fn from_canonical_key(key: &[u8], mode: HeapMode) -> Result<Self> {
        let mut pos = 0usize;
        let read_u32 = |pos: &mut usize| -> Result<u32> {
            let bytes = key
                .get(*pos..*pos + 4)
                .ok_or_else(|| Error::InvalidKey("truncated".into()))?;
            *pos += 4;
            Ok(u32::from_le_bytes(bytes.try_into().unwrap()))
        };
        let n = read_u32(&mut pos)?;
        let mut heap = ColoredHeap::new(n, mode).map_err(|e| Error::InvalidKey(e.to_string()))?;
        for col in 0..n as usize {
            let count = read_u32(&mut pos)?;
            for _ in 0..count {
                let level = read_u32(&mut pos)?;
                let sign = match key.get(pos) {
                    Some(0x01) => Sign::Plus,
                    Some(0xFF) => Sign::Minus,
                    Some(b) => return Err(Error::InvalidKey(format!("bad color byte {b:#04x}"))),
                    None => return Err(Error::InvalidKey("truncated".into())),
                };
                pos += 1;
                heap.columns[col].push(Cell { level, sign });
                heap.cells += 1;
            }
        }
        if pos != key.len() {
            return Err(Error::InvalidKey("trailing bytes".into()));
        }
        heap.check_invariants().map_err(Error::InvalidKey)?;
        Ok(heap)
    }

    /// Reads the unique normal form off the heap.
    ///
    /// Cells are emitted one at a time, always taking the left-most column
    /// whose lowest remaining cell has no remaining cell below it in the
    /// neighbouring columns. The letter sequence produced is the
    /// lexicographically least spelling of the element; grouping equal
    /// consecutive letters gives syllables obeying the succession rule.
    pub fn normal_form(&self) -> NormalWord {
        let n = self.n as usize;
        let mut next = vec![0usize; n];
        let mut syllables: Vec<Syllable> = Vec::new();
        let pending_level = |next: &[usize], j: usize| -> Option<u32> {
            self.columns[j].get(next[j]).map(|c| c.level)
        };
        for _ in 0..self.cells {
            let col = (0..n)
                .find(|&i| match pending_level(&next, i) {
                    None => false,
                    Some(level) => {
                        let blocked = |j: usize| pending_level(&next, j).is_some_and(|l| l < level);
                        !(i > 0 && blocked(i - 1)) && !(i + 1 < n && blocked(i + 1))
                    }
                })
                .expect("a valid heap always has a minimal cell");
            let cell = self.columns[col][next[col]];
            next[col] += 1;
            let index = col as u32 + 1;
            match syllables.last_mut() {
                Some(s) if s.index == index && s.exponent.signum() == cell.sign.as_i64() => {
                    s.exponent += cell.sign.as_i64();
                }
                _ => syllables.push(Syllable {
                    index,
                    exponent: cell.sign.as_i64(),
                }),
            }
        }
        NormalWord {
            n: self.n,
            syllables,
        }
    }

    /// Copy of the heap with the top cell of column `i` deleted and all
    /// other cells left where they are. No validity check is made.
    pub fn without_top(&self, i: u32) -> ColoredHeap {
        let mut h = self.clone();
        if h.columns[(i - 1) as usize].pop().is_some() {
            h.cells -= 1;
        }
        h
    }

    /// Checks the heap conditions: no two horizontally adjacent cells share
    /// a level, every cell above level 1 is supported from the level below,
    /// vertically touching cells in a column share a color (semigroup-like
    /// modes carry only plus cells), and levels increase along each column.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let n = self.n as usize;
        let occupied = |col: isize, level: u32| -> bool {
            col >= 0
                && (col as usize) < n
                && self.columns[col as usize]
                    .binary_search_by_key(&level, |c| c.level)
                    .is_ok()
        };
        let mut count = 0;
        for (ci, col) in self.columns.iter().enumerate() {
            count += col.len();
            for (k, cell) in col.iter().enumerate() {
                if cell.level == 0 {
                    return Err(format!("column {} has a cell at level 0", ci + 1));
                }
                if k > 0 && col[k - 1].level >= cell.level {
                    return Err(format!("column {} levels not increasing", ci + 1));
                }
                if k > 0 && col[k - 1].level + 1 == cell.level && col[k - 1].sign != cell.sign {
                    return Err(format!("column {} has touching cells of different color", ci + 1));
                }
                if cell.sign == Sign::Minus && !self.mode.has_inverses() {
                    return Err(format!("column {} has a minus cell in {} mode", ci + 1, self.mode.name()));
                }
                let c = ci as isize;
                if occupied(c + 1, cell.level) {
                    return Err(format!("columns {} and {} both occupy level {}", ci + 1, ci + 2, cell.level));
                }
                if cell.level > 1 && !(occupied(c - 1, cell.level - 1) || occupied(c, cell.level - 1) || occupied(c + 1, cell.level - 1)) {
                    return Err(format!("cell at column {} level {} is unsupported", ci + 1, cell.level));
                }
            }
            if let HeapMode::Restricted(r) = self.mode {
                let mut run = 0u32;
                for (k, cell) in col.iter().enumerate() {
                    run = if k > 0 && col[k - 1].level + 1 == cell.level { run + 1 } else { 1 };
                    let limit = r / 2;
                    if run > limit || (r % 2 == 0 && run == limit && cell.sign == Sign::Minus) {
                        return Err(format!("column {} syllable is not geodesic for r = {r}", ci + 1));
                    }
                }
            }
        }
        if count != self.cells {
            return Err("cell count out of sync".into());
        }
        Ok(())
    }
}

/// Geodesic representative of class `c` in `Z/rZ`: (length, sign).
fn geodesic(c: u32, r: u32) -> (u32, Sign) {
    if c <= r - c {
        (c, Sign::Plus)
    } else {
        (r - c, Sign::Minus)
    }
}

/// Builds the heap of a word by left-folding [`ColoredHeap::push`].
pub fn heap_from_word(letters: &[Letter], n: u32, mode: HeapMode) -> Result<ColoredHeap> {
    let mut h = ColoredHeap::new(n, mode)?;
    for &l in letters {
        h.push(l)?;
    }
    Ok(h)
}

/// The heap of `heap · letter`.
pub fn push_letter(heap: &ColoredHeap, letter: Letter) -> Result<ColoredHeap> {
    heap.pushed(letter)
}

pub fn normal_form_readout(heap: &ColoredHeap) -> NormalWord {
    heap.normal_form()
}

pub fn roof_of(heap: &ColoredHeap) -> RoofSet {
    heap.roof()
}

pub fn canonical_key(heap: &ColoredHeap) -> Vec<u8> {
    heap.canonical_key()
}

/// Set of achievable generators, one optional color per column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoofSet {
    entries: Vec<Option<Sign>>,
    size: usize,
}

impl RoofSet {
    pub fn entries(&self) -> &[Option<Sign>] {
        &self.entries
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Marked columns, 1-based, ascending.
    pub fn columns(&self) -> Vec<u32> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_some())
            .map(|(i, _)| i as u32 + 1)
            .collect()
    }

    pub fn contains(&self, i: u32) -> bool {
        i >= 1 && self.entries.get((i - 1) as usize).is_some_and(|e| e.is_some())
    }

    /// `⌊(n+1)/2⌋`, the largest possible roof size.
    pub fn max_size(n: u32) -> usize {
        (n as usize).div_ceil(2)
    }

    /// No two adjacent columns are marked.
    pub fn is_independent(&self) -> bool {
        self.entries.windows(2).all(|w| !(w[0].is_some() && w[1].is_some()))
    }
}

/// One factor `f_index^exponent` of a normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syllable {
    pub index: u32,
    pub exponent: i64,
}

/// Normal form: a syllable sequence obeying the succession rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalWord {
    n: u32,
    syllables: Vec<Syllable>,
}

impl NormalWord {
    /// Validating constructor.
    pub fn new(n: u32, syllables: Vec<Syllable>) -> Result<Self> {
        let w = NormalWord { n, syllables };
        w.validate()?;
        Ok(w)
    }

    pub fn empty(n: u32) -> Self {
        NormalWord {
            n,
            syllables: Vec::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn indices(&self) -> Vec<u32> {
        self.syllables.iter().map(|s| s.index).collect()
    }

    /// `Σ |m_i|`.
    pub fn length(&self) -> u64 {
        self.syllables.iter().map(|s| s.exponent.unsigned_abs()).sum()
    }

    /// Expands the syllables into letters.
    pub fn letters(&self) -> Vec<Letter> {
        self.syllables
            .iter()
            .flat_map(|s| {
                let sign = if s.exponent > 0 { Sign::Plus } else { Sign::Minus };
                std::iter::repeat_n(Letter::new(s.index, sign), s.exponent.unsigned_abs() as usize)
            })
            .collect()
    }

    /// Checks index range, nonzero exponents and the succession rule.
    pub fn validate(&self) -> Result<()> {
        for s in &self.syllables {
            if s.index == 0 || s.index > self.n {
                return Err(Error::IndexOutOfRange { index: s.index, n: self.n });
            }
            if s.exponent == 0 {
                return Err(invalid("syllable exponent must be nonzero"));
            }
        }
        for w in self.syllables.windows(2) {
            if !may_follow(w[0].index, w[1].index) {
                return Err(invalid(format!("index {} may not follow index {}", w[1].index, w[0].index)));
            }
        }
        Ok(())
    }
}

impl fmt::Display for NormalWord {
    /// `f2 f1^-2 f3`; the identity prints as `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "e");
        }
        for (k, s) in self.syllables.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if s.exponent == 1 {
                write!(f, "f{}", s.index)?;
            } else {
                write!(f, "f{}^{}", s.index, s.exponent)?;
            }
        }
        Ok(())
    }
}
