use super::perm::{compose, Perm};

/// One level of a stabilizer chain: the orbit of `base` under the current
/// stabilizer, with a coset representative mapping `base` to each orbit point.
#[derive(Clone, Debug)]
struct Level {
    base: u32,
    gens: Vec<Perm>,
    transversal: Vec<Option<Perm>>,
    orbit: Vec<u32>,
}

impl Level {
    fn new(base: u32, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base as usize] = Some(Perm::identity());
        Level { base, gens: Vec::new(), transversal, orbit: vec![base] }
    }

    fn rebuild(&mut self) {
        let degree = self.transversal.len();
        self.transversal = vec![None; degree];
        self.transversal[self.base as usize] = Some(Perm::identity());
        self.orbit = vec![self.base];
        let mut k = 0;
        while k < self.orbit.len() {
            let b = self.orbit[k];
            let u = self.transversal[b as usize].clone().expect("orbit point has representative");
            for g in &self.gens {
                let c = g.apply(b);
                if self.transversal[c as usize].is_none() {
                    self.transversal[c as usize] = Some(compose(g, &u));
                    self.orbit.push(c);
                }
            }
            k += 1;
        }
    }
}

/// Stabilizer chain built by the deterministic Schreier–Sims algorithm.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(gens: &[Perm], degree: usize) -> Self {
        let degree = gens.iter().map(Perm::degree).max().unwrap_or(0).max(degree);
        let mut chain = StabChain { degree, levels: Vec::new() };
        let gens: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if gens.is_empty() {
            return chain;
        }
        for g in &gens {
            let moved = first_moved_not_in(g, &[]);
            if chain.levels.iter().all(|l| g.apply(l.base) == l.base) {
                if let Some(b) = moved {
                    if chain.levels.is_empty() || chain.levels.iter().all(|l| l.base != b) {
                        chain.levels.push(Level::new(b, degree));
                    }
                }
            }
        }
        if chain.levels.is_empty() {
            chain.levels.push(Level::new(first_moved_not_in(&gens[0], &[]).unwrap(), degree));
        }
        chain.levels[0].gens = gens.clone();
        for i in 1..chain.levels.len() {
            let bases: Vec<u32> = chain.levels[..i].iter().map(|l| l.base).collect();
            chain.levels[i].gens =
                gens.iter().filter(|g| bases.iter().all(|&b| g.apply(b) == b)).cloned().collect();
        }
        for l in chain.levels.iter_mut() {
            l.rebuild();
        }
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        'outer: while i >= 0 {
            let iu = i as usize;
            let orbit = self.levels[iu].orbit.clone();
            let gens = self.levels[iu].gens.clone();
            for &b in &orbit {
                let ub = self.levels[iu].transversal[b as usize].clone().unwrap();
                for s in &gens {
                    let sb = s.apply(b);
                    let usb = self.levels[iu].transversal[sb as usize].as_ref().unwrap();
                    let sg = compose(&usb.inverse(), &compose(s, &ub));
                    if sg.is_identity() {
                        continue;
                    }
                    let (h, j) = self.strip(&sg, iu + 1);
                    if h.is_identity() {
                        continue;
                    }
                    if j == self.levels.len() {
                        let bases: Vec<u32> = self.levels.iter().map(|l| l.base).collect();
                        let b = first_moved_not_in(&h, &bases).expect("nontrivial residue moves a point");
                        self.levels.push(Level::new(b, self.degree));
                    }
                    for l in iu + 1..=j {
                        self.levels[l].gens.push(h.clone());
                        self.levels[l].rebuild();
                    }
                    i = j as isize;
                    continue 'outer;
                }
            }
            i -= 1;
        }
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level
    /// at which it dropped out (`levels.len()` if it passed every level).
    fn strip(&self, g: &Perm, from: usize) -> (Perm, usize) {
        let mut h = g.clone();
        for j in from..self.levels.len() {
            let l = &self.levels[j];
            let b = h.apply(l.base);
            match &l.transversal[b as usize] {
                Some(u) => h = compose(&u.inverse(), &h),
                None => return (h, j),
            }
        }
        (h, self.levels.len())
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() > self.degree {
            return false;
        }
        let (h, _) = self.strip(g, 0);
        h.is_identity()
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }
}

fn first_moved_not_in(g: &Perm, exclude: &[u32]) -> Option<u32> {
    (0..g.degree() as u32).find(|&p| g.apply(p) != p && !exclude.contains(&p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        Perm::parse(s).unwrap()
    }

    #[test]
    fn symmetric_orders() {
        let s5 = StabChain::new(&[p("(1,2)"), p("(1,2,3,4,5)")], 5);
        assert_eq!(s5.order(), 120);
        let a5 = StabChain::new(&[p("(1,2,3)"), p("(1,2,3,4,5)")], 5);
        assert_eq!(a5.order(), 60);
        assert!(a5.contains(&p("(1,2)(3,4)")));
        assert!(!a5.contains(&p("(1,2)")));
    }

    #[test]
    fn mathieu_11() {
        let m11 = StabChain::new(&[p("(1,2,3,4,5,6,7,8,9,10,11)"), p("(3,7,11,8)(4,10,5,6)")], 11);
        assert_eq!(m11.order(), 7920);
    }

    #[test]
    fn trivial() {
        assert_eq!(StabChain::new(&[Perm::identity()], 3).order(), 1);
    }
}
