//! Named invocations that regenerate the data behind each figure.

#[derive(Debug, Clone, Copy)]
pub struct Recipe {
    pub name: &'static str,
    pub description: &'static str,
    /// Arguments after the program name, without `--out`.
    pub args: &'static [&'static str],
}

impl Recipe {
    pub fn command_line(&self) -> String {
        format!("bounce {}", self.args.join(" "))
    }
}

pub const RECIPES: &[Recipe] = &[
    Recipe {
        name: "fig2",
        description: "C and P over (k, gA) at gB = 3, spin exchange",
        args: &["scan", "--model", "xy", "--axis", "k:0.05:10:200", "--axis", "gA:0:10:201", "--gB", "3", "--observables", "C_t,P_t"],
    },
    Recipe {
        name: "fig3a",
        description: "C and P along k at gA = gB = 3, spin exchange",
        args: &["scan", "--model", "xy", "--axis", "k:0.05:10:996", "--gA", "3", "--gB", "3", "--observables", "C_t,P_t"],
    },
    Recipe {
        name: "fig3b",
        description: "bounce-truncated C and P along k at gA = gB = 3",
        args: &["truncate", "--model", "xy", "--axis", "k:0.05:10:996", "--gA", "3", "--gB", "3", "--n", "0,1,3"],
    },
    Recipe {
        name: "fig4a",
        description: "C and P over (omegaA, omegaB) on resonance",
        args: &["scan", "--model", "xy", "--axis", "omegaA:0:3:151", "--axis", "omegaB:0:3:151", "--sin2kd", "1", "--observables", "C_t,P_t"],
    },
    Recipe {
        name: "fig4b",
        description: "best C, its P and phase over (omegaA, omegaB)",
        args: &["scan", "--model", "xy", "--axis", "omegaA:0:3:151", "--axis", "omegaB:0:3:151", "--observables", "C_opt,P_opt,sin2_opt"],
    },
    Recipe {
        name: "fig5",
        description: "C and P per side over (k, gA) at gB = 1.5, Heisenberg contact",
        args: &["scan", "--model", "heis", "--axis", "k:0.05:10:200", "--axis", "gA:0:5:201", "--gB", "1.5", "--observables", "C_r,P_r,C_t,P_t"],
    },
    Recipe {
        name: "fig6",
        description: "C and P per side along k at gA = gB = 1.5, Heisenberg contact",
        args: &["scan", "--model", "heis", "--axis", "k:0.05:10:996", "--gA", "1.5", "--gB", "1.5", "--observables", "C_r,P_r,C_t,P_t"],
    },
];

pub fn find(name: &str) -> Option<&'static Recipe> {
    RECIPES.iter().find(|r| r.name == name)
}

pub fn listing() -> String {
    RECIPES
        .iter()
        .map(|r| format!("{:<6} {}\n       {}\n", r.name, r.description, r.command_line()))
        .collect()
}
