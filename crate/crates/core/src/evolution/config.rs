use serde::{Deserialize, Serialize};

use crate::code::CodeLimits;
use crate::fitness::LossConfig;

/// Relative rates of the mutation kinds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MutationWeights {
    pub insertion: f64,
    pub knockout: f64,
    pub op_change: f64,
    pub param_change: f64,
    pub randomization: f64,
    pub no_op: f64,
}

impl Default for MutationWeights {
    fn default() -> Self {
        MutationWeights {
            insertion: 1.0,
            knockout: 3.0,
            op_change: 1.0,
            param_change: 2.0,
            randomization: 1.0,
            no_op: 1.0,
        }
    }
}

impl MutationWeights {
    /// In [`super::MutationKind::ALL`] order.
    pub fn as_array(&self) -> [f64; 6] {
        [
            self.insertion,
            self.knockout,
            self.op_change,
            self.param_change,
            self.randomization,
            self.no_op,
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub population_size: usize,
    pub tournament_size: usize,
    pub elite_count: usize,
    pub temperature_initial: f64,
    /// Per-generation factor applied to the temperature.
    pub temperature_decay: f64,
    pub batch_size: usize,
    pub max_nodes: usize,
    pub int_registers: usize,
    pub bool_registers: usize,
    pub float_registers: usize,
    pub sigma: f64,
    pub reg_weight: f64,
    pub mutation_weights: MutationWeights,
    pub if_insert_prob: f64,
    pub int_step_std: f64,
    pub float_step_std: f64,
    pub max_generations: u64,
    /// Wall-clock limit in seconds; `None` runs until `max_generations`.
    pub time_budget_secs: Option<f64>,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        let limits = CodeLimits::default();
        SearchConfig {
            population_size: 1000,
            tournament_size: 4,
            elite_count: 10,
            temperature_initial: 10.0,
            temperature_decay: 0.9998,
            batch_size: 16,
            max_nodes: limits.max_nodes,
            int_registers: limits.int_regs,
            bool_registers: limits.bool_regs,
            float_registers: limits.float_regs,
            sigma: 1.0,
            reg_weight: 1e-8,
            mutation_weights: MutationWeights::default(),
            if_insert_prob: 0.2,
            int_step_std: 1.0,
            float_step_std: 0.1,
            max_generations: 1_000_000,
            time_budget_secs: None,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn limits(&self) -> CodeLimits {
        CodeLimits {
            int_regs: self.int_registers,
            bool_regs: self.bool_registers,
            float_regs: self.float_registers,
            max_nodes: self.max_nodes,
        }
    }

    pub fn loss_config(&self, extractor: crate::fitness::ExtractorKind) -> LossConfig {
        LossConfig {
            sigma: self.sigma,
            reg_weight: self.reg_weight,
            extractor,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let fail = |m: String| Err(m);
        if self.population_size <= self.elite_count {
            return fail(format!(
                "population_size ({}) must exceed elite_count ({})",
                self.population_size, self.elite_count
            ));
        }
        if self.tournament_size == 0 {
            return fail("tournament_size must be at least 1".into());
        }
        if !(self.temperature_decay > 0.0 && self.temperature_decay < 1.0) {
            return fail(format!("temperature_decay must lie in (0, 1), got {}", self.temperature_decay));
        }
        if !(self.temperature_initial >= 0.0 && self.temperature_initial.is_finite()) {
            return fail("temperature_initial must be finite and non-negative".into());
        }
        if self.batch_size == 0 {
            return fail("batch_size must be at least 1".into());
        }
        // i, j and N occupy the first three integer registers.
        if self.int_registers < 3 || self.bool_registers == 0 || self.float_registers == 0 {
            return fail("need at least 3 integer, 1 boolean and 1 float register".into());
        }
        let w = self.mutation_weights.as_array();
        if w.iter().any(|x| !(*x >= 0.0 && x.is_finite())) || w.iter().sum::<f64>() <= 0.0 {
            return fail("mutation weights must be non-negative with a positive sum".into());
        }
        if !(0.0..=1.0).contains(&self.if_insert_prob) {
            return fail("if_insert_prob must lie in [0, 1]".into());
        }
        if !(self.int_step_std >= 0.0 && self.float_step_std >= 0.0) {
            return fail("step deviations must be non-negative".into());
        }
        if let Some(t) = self.time_budget_secs {
            if t.is_nan() || t < 0.0 {
                return fail("time_budget_secs must be non-negative".into());
            }
        }
        self.loss_config(Default::default()).validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        SearchConfig::default().validate().unwrap();
        assert_eq!(SearchConfig::default().limits(), CodeLimits::default());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let base = SearchConfig::default();
        for bad in [
            SearchConfig { population_size: 10, ..base.clone() },
            SearchConfig { tournament_size: 0, ..base.clone() },
            SearchConfig { temperature_decay: 1.0, ..base.clone() },
            SearchConfig { sigma: -1.0, ..base.clone() },
            SearchConfig { if_insert_prob: 1.5, ..base.clone() },
            SearchConfig {
                mutation_weights: MutationWeights {
                    insertion: 0.0,
                    knockout: 0.0,
                    op_change: 0.0,
                    param_change: 0.0,
                    randomization: 0.0,
                    no_op: 0.0,
                },
                ..base.clone()
            },
        ] {
            assert!(bad.validate().is_err());
        }
    }
}
