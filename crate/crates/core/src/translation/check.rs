//! Bounded diagnostics: image coverage, injectivity and rule application sets.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::ops::ControlFlow;

use serde::Serialize;

use super::Translation;
use crate::calculus::Rule;
use crate::error::{Error, Result};
use crate::syntax::{enumerate_layers, BindingSpace, Formula, Layers, Var, DEFAULT_MAX_FORMULAS};

/// Bounds for the image diagnostics.
#[derive(Clone, Copy, Debug)]
pub struct ImageConfig {
    /// Individual variables (and propositional variables) are drawn from index `1..=vars_limit`.
    pub vars_limit: u32,
    /// Depth of the source formulas whose images are computed. `None` derives
    /// it from the target depth and the shallowest defining template.
    pub source_depth: Option<usize>,
    pub max_formulas: usize,
}

impl Default for ImageConfig {
    fn default() -> Self {
        ImageConfig {
            vars_limit: 2,
            source_depth: None,
            max_formulas: DEFAULT_MAX_FORMULAS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Surjectivity {
    SurjectiveUpTo {
        depth: usize,
        checked: usize,
    },
    Missing {
        witness: String,
        #[serde(skip)]
        formula: Formula,
        depth: usize,
    },
}

impl Surjectivity {
    pub fn holds(&self) -> bool {
        matches!(self, Surjectivity::SurjectiveUpTo { .. })
    }

    pub fn witness(&self) -> Option<&Formula> {
        match self {
            Surjectivity::Missing { formula, .. } => Some(formula),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Injectivity {
    InjectiveUpTo {
        depth: usize,
        checked: usize,
    },
    Collision {
        first: String,
        second: String,
        image: String,
        #[serde(skip)]
        pair: (Formula, Formula),
    },
}

impl Injectivity {
    pub fn holds(&self) -> bool {
        matches!(self, Injectivity::InjectiveUpTo { .. })
    }

    pub fn witness(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Injectivity::Collision { pair, .. } => Some((&pair.0, &pair.1)),
            _ => None,
        }
    }
}

fn source_depth_for(t: &Translation, depth: usize, cfg: &ImageConfig) -> usize {
    cfg.source_depth.unwrap_or_else(|| {
        // Templates of depth >= 1 never shrink a formula, so sources deeper
        // than the target bound cannot land inside it.
        if t.min_template_depth() >= 1 {
            depth
        } else {
            depth + 1
        }
    })
}

/// Looks for a target formula of depth `<= depth` outside the image of the
/// translation restricted to source formulas of the configured depth. The
/// witness is the first missing formula in enumeration order, hence of
/// minimal depth.
pub fn surjective_up_to(t: &Translation, depth: usize, cfg: &ImageConfig) -> Result<Surjectivity> {
    let targets = enumerate_layers(&t.target, depth, cfg.vars_limit, cfg.max_formulas)?;
    let sources = enumerate_layers(&t.source, source_depth_for(t, depth, cfg), cfg.vars_limit, cfg.max_formulas)?;
    let image: HashSet<Formula> = sources
        .all()
        .iter()
        .map(|f| t.translate_unchecked(f))
        .filter(|g| g.depth() <= depth)
        .collect();
    for f in targets.all() {
        if !image.contains(f) {
            return Ok(Surjectivity::Missing {
                witness: f.to_string(),
                formula: f.clone(),
                depth: f.depth(),
            });
        }
    }
    Ok(Surjectivity::SurjectiveUpTo {
        depth,
        checked: targets.len(),
    })
}

/// Looks for two distinct source formulas of depth `<= depth` with the same image.
pub fn injective_up_to(t: &Translation, depth: usize, cfg: &ImageConfig) -> Result<Injectivity> {
    let sources = enumerate_layers(&t.source, depth, cfg.vars_limit, cfg.max_formulas)?;
    let mut seen: HashMap<Formula, &Formula> = HashMap::with_capacity(sources.len());
    for f in sources.all() {
        let g = t.translate_unchecked(f);
        if let Some(prev) = seen.get(&g) {
            return Ok(Injectivity::Collision {
                first: prev.to_string(),
                second: f.to_string(),
                image: g.to_string(),
                pair: ((*prev).clone(), f.clone()),
            });
        }
        seen.insert(g, f);
    }
    Ok(Injectivity::InjectiveUpTo {
        depth,
        checked: sources.len(),
    })
}

/// One application of a rule: premises and conclusion.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Application {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl Application {
    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.premises.iter().chain(std::iter::once(&self.conclusion))
    }

    pub fn depth(&self) -> usize {
        self.formulas().map(Formula::depth).max().unwrap_or(0)
    }
}

/// Every application of `rule` whose premises and conclusion all have depth
/// `<= depth`, with metavariables filled from `layers` and variables from `vars`.
pub fn rule_appset(rule: &Rule, layers: &Layers, vars: &[Var], depth: usize, max: usize) -> Result<BTreeSet<Application>> {
    let templates: Vec<_> = rule.premises.iter().chain(std::iter::once(&rule.conclusion)).collect();
    let mut out = BTreeSet::new();
    let Some(space) = BindingSpace::bounded(&templates, &rule.side_conditions, layers, vars, depth) else {
        return Ok(out);
    };
    space.for_each(|b| {
        let app = Application {
            premises: rule.premises.iter().map(|p| p.fill(b)).collect::<Result<_>>()?,
            conclusion: rule.conclusion.fill(b)?,
        };
        out.insert(app);
        if out.len() > max {
            return Err(Error::ResourceCap(format!("more than {max} rule applications")));
        }
        Ok(ControlFlow::Continue(()))
    })?;
    Ok(out)
}

/// Image under `t` of the source applications of `rule` whose formulas have
/// depth `<= universe_depth`.
pub fn translate_rule_appset(t: &Translation, rule: &Rule, universe_depth: usize, cfg: &ImageConfig) -> Result<BTreeSet<Application>> {
    let layers = enumerate_layers(&t.source, universe_depth, cfg.vars_limit, cfg.max_formulas)?;
    let vars: Vec<Var> = (1..=t.source.vars.truncate(cfg.vars_limit)).map(Var).collect();
    let apps = rule_appset(rule, &layers, &vars, universe_depth, cfg.max_formulas)?;
    Ok(apps
        .into_iter()
        .map(|a| Application {
            premises: a.premises.iter().map(|p| t.translate_unchecked(p)).collect(),
            conclusion: t.translate_unchecked(&a.conclusion),
        })
        .collect())
}

/// The two readings of a translated rule, restricted to applications whose
/// target formulas all have depth `<= depth`: the schema reading (metavariables
/// range over every target formula) and the application-set reading (images of
/// source applications only).
#[derive(Clone, Debug)]
pub struct RuleReadings {
    pub schema: BTreeSet<Application>,
    pub image: BTreeSet<Application>,
}

impl RuleReadings {
    pub fn compute(t: &Translation, rule: &Rule, depth: usize, cfg: &ImageConfig) -> Result<RuleReadings> {
        let translated = Rule {
            name: format!("{}'", rule.name),
            premises: rule.premises.iter().map(|p| t.translate_template(p)).collect::<Result<_>>()?,
            conclusion: t.translate_template(&rule.conclusion)?,
            side_conditions: rule.side_conditions.clone(),
            fresh: rule.fresh,
        };
        let layers = enumerate_layers(&t.target, depth, cfg.vars_limit, cfg.max_formulas)?;
        let vars: Vec<Var> = (1..=t.target.vars.truncate(cfg.vars_limit)).map(Var).collect();
        let schema = rule_appset(&translated, &layers, &vars, depth, cfg.max_formulas)?;
        let image = translate_rule_appset(t, rule, source_depth_for(t, depth, cfg), cfg)?
            .into_iter()
            .filter(|a| a.depth() <= depth)
            .collect();
        Ok(RuleReadings { schema, image })
    }

    /// The application-set reading is contained in the schema reading and misses something.
    pub fn image_is_strict_subset(&self) -> bool {
        self.image.is_subset(&self.schema) && self.image.len() < self.schema.len()
    }
}
