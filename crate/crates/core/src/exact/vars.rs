use std::fmt;

/// What a variable stands for. The role decides which variables a difference
/// operator may shift and how a variable is printed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarRole {
    /// Planck's constant ħ, kept formal.
    Planck,
    /// A spectral parameter (λ, μ).
    Spectral,
    /// Gelfand-Zetlin coordinate γ_{row,col}.
    Gz { row: u8, col: u8 },
    /// Deformation parameter (s with q = s⁴, or t with q̃ = t⁴).
    Param,
    /// Torus coordinate v_{row,col}.
    TorusV { row: u8, col: u8 },
    /// Dual torus coordinate ṽ_{row,col}.
    DualV { row: u8, col: u8 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var {
    pub name: String,
    pub role: VarRole,
}

/// Ordered, immutable list of variables. The position of a variable is its
/// index in every exponent vector; that order is also the monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarTable {
    vars: Vec<Var>,
}

impl VarTable {
    pub fn new(vars: Vec<Var>) -> Self {
        for (i, a) in vars.iter().enumerate() {
            assert!(
                vars[..i].iter().all(|b| b.name != a.name),
                "duplicate variable {}",
                a.name
            );
        }
        assert!(vars.len() <= 64, "at most 64 variables are supported");
        VarTable { vars }
    }

    /// ħ, λ, μ followed by γ_{nj} for 1 ≤ j ≤ n ≤ size, row by row.
    pub fn gelfand_zetlin(size: usize) -> Self {
        let mut vars = vec![
            Var { name: "hbar".into(), role: VarRole::Planck },
            Var { name: "lambda".into(), role: VarRole::Spectral },
            Var { name: "mu".into(), role: VarRole::Spectral },
        ];
        for n in 1..=size {
            for j in 1..=n {
                vars.push(Var {
                    name: format!("g{n}{j}"),
                    role: VarRole::Gz { row: n as u8, col: j as u8 },
                });
            }
        }
        VarTable::new(vars)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var(&self, idx: usize) -> &Var {
        &self.vars[idx]
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn index_of_role(&self, role: VarRole) -> Option<usize> {
        self.vars.iter().position(|v| v.role == role)
    }

    pub fn planck(&self) -> Option<usize> {
        self.index_of_role(VarRole::Planck)
    }

    pub fn gz(&self, row: usize, col: usize) -> Option<usize> {
        self.index_of_role(VarRole::Gz { row: row as u8, col: col as u8 })
    }

    pub fn names(&self) -> Vec<&str> {
        self.vars.iter().map(|v| v.name.as_str()).collect()
    }
}

impl fmt::Display for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names().join(", "))
    }
}
