//! Star colorings assembled from partitions, and a dispatcher picking the
//! strongest applicable bound for a given graph.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::decompose::{check_hypothesis, decompose, verify_partition, Class, DecomposeError, Partition, Scheme};
use crate::graph::Graph;
use crate::star::{
    exact_star_chromatic, star_color_forest, verify_star, Coloring, StarChromatic, StarError, StarVerdict,
};

/// Largest graph handed to the exact solver by the dispatcher.
pub const EXACT_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Route {
    #[serde(rename = "forest3")]
    Forest3,
    #[serde(rename = "thm_i_4")]
    ThmI,
    #[serde(rename = "thm_ii_5")]
    ThmII,
    #[serde(rename = "thm_iii_6")]
    ThmIII,
    #[serde(rename = "exact_solver")]
    Exact,
}

impl Route {
    /// Palette bound of the route; `None` for the exact solver.
    pub fn bound(self) -> Option<usize> {
        match self {
            Route::Forest3 => Some(3),
            Route::ThmI => Some(4),
            Route::ThmII => Some(5),
            Route::ThmIII => Some(6),
            Route::Exact => None,
        }
    }

    fn scheme(self) -> Option<Scheme> {
        match self {
            Route::ThmI => Some(Scheme::FI),
            Route::ThmII => Some(Scheme::FI1I2),
            Route::ThmIII => Some(Scheme::FI1I2I3),
            _ => None,
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Forest3 => "forest3",
            Route::ThmI => "thm_i_4",
            Route::ThmII => "thm_ii_5",
            Route::ThmIII => "thm_iii_6",
            Route::Exact => "exact_solver",
        })
    }
}

/// Route requested by a caller; `Auto` lets the dispatcher choose.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RouteChoice {
    Auto,
    Forest,
    Thm1,
    Thm2,
    Thm3,
    Exact,
}

impl FromStr for RouteChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(RouteChoice::Auto),
            "forest" | "forest3" => Ok(RouteChoice::Forest),
            "thm1" => Ok(RouteChoice::Thm1),
            "thm2" => Ok(RouteChoice::Thm2),
            "thm3" => Ok(RouteChoice::Thm3),
            "exact" => Ok(RouteChoice::Exact),
            _ => Err(format!(
                "unknown route `{s}` (expected auto, forest, thm1, thm2, thm3 or exact)"
            )),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColorizeError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Star(#[from] StarError),
    #[error("assembled coloring is not a star coloring: {0}")]
    Unsound(String),
    #[error("no route applies: {0}")]
    NotCovered(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoringCertificate {
    pub route: Route,
    pub coloring: Coloring,
    pub partition: Option<Partition>,
    pub verdict: StarVerdict,
}

impl ColoringCertificate {
    pub fn palette_size(&self) -> usize {
        self.coloring.palette_size
    }
}

/// Colors `G[F]` with 3 colors by depth and gives each independent class its
/// own color (3, 4, 5 in scheme order).
pub fn color_from_partition(g: &Graph, p: &Partition) -> Result<Coloring, ColorizeError> {
    let verdict = verify_partition(g, p)?;
    if let Some(v) = verdict.violation {
        return Err(ColorizeError::InvalidPartition(v.to_string()));
    }
    let forest = g.induced(&p.members(Class::F));
    let mut colors = star_color_forest(&forest)?.colors;
    colors.resize(g.order(), None);
    for (i, &c) in p.scheme.independent_classes().iter().enumerate() {
        for v in p.members(c) {
            colors[v] = Some(3 + i);
        }
    }
    let coloring = Coloring::new(colors, p.scheme.colors());
    let check = verify_star(g, &coloring)?;
    if let Some(v) = check.violation {
        return Err(ColorizeError::Unsound(format!("{v:?}")));
    }
    Ok(coloring)
}

/// The dispatcher: forest, then the three Mad/girth bounds, then the exact
/// solver when allowed and the graph has at most [`EXACT_LIMIT`] vertices.
pub fn star_color(g: &Graph, allow_exact_fallback: bool) -> Result<ColoringCertificate, ColorizeError> {
    if g.is_forest() {
        return star_color_via(g, RouteChoice::Forest);
    }
    for choice in [RouteChoice::Thm1, RouteChoice::Thm2, RouteChoice::Thm3] {
        let scheme = route_of(choice).and_then(Route::scheme).unwrap();
        if check_hypothesis(g, scheme, true).is_ok() {
            return star_color_via(g, choice);
        }
    }
    if allow_exact_fallback && g.num_vertices() <= EXACT_LIMIT {
        return star_color_via(g, RouteChoice::Exact);
    }
    Err(ColorizeError::NotCovered(if allow_exact_fallback {
        format!(
            "no bound applies and {} vertices exceed the exact limit {EXACT_LIMIT}",
            g.num_vertices()
        )
    } else {
        "no bound applies and the exact fallback is disabled".into()
    }))
}

fn route_of(choice: RouteChoice) -> Option<Route> {
    match choice {
        RouteChoice::Auto => None,
        RouteChoice::Forest => Some(Route::Forest3),
        RouteChoice::Thm1 => Some(Route::ThmI),
        RouteChoice::Thm2 => Some(Route::ThmII),
        RouteChoice::Thm3 => Some(Route::ThmIII),
        RouteChoice::Exact => Some(Route::Exact),
    }
}

/// Colors `g` by the requested route, refusing when its hypothesis fails.
pub fn star_color_via(g: &Graph, choice: RouteChoice) -> Result<ColoringCertificate, ColorizeError> {
    let Some(route) = route_of(choice) else {
        return star_color(g, true);
    };
    let (coloring, partition) = match route {
        Route::Forest3 => {
            if !g.is_forest() {
                return Err(ColorizeError::NotCovered("the graph is not a forest".into()));
            }
            (star_color_forest(g)?, None)
        }
        Route::Exact => {
            if g.num_vertices() > EXACT_LIMIT {
                return Err(ColorizeError::NotCovered(format!(
                    "{} vertices exceed the exact limit {EXACT_LIMIT}",
                    g.num_vertices()
                )));
            }
            match exact_star_chromatic(g, g.num_vertices().max(1))? {
                StarChromatic::Exact { coloring, .. } => (coloring, None),
                StarChromatic::TooMany { .. } => unreachable!("n colors always suffice"),
            }
        }
        _ => {
            let scheme = route.scheme().unwrap();
            let (p, _) = decompose(g, scheme, true).map_err(|e| match e {
                DecomposeError::MadTooLarge { .. } | DecomposeError::GirthTooSmall { .. } => {
                    ColorizeError::NotCovered(e.to_string())
                }
                other => ColorizeError::Decompose(other),
            })?;
            (color_from_partition(g, &p)?, Some(p))
        }
    };
    let verdict = verify_star(g, &coloring)?;
    if let Some(v) = &verdict.violation {
        return Err(ColorizeError::Unsound(format!("{v:?}")));
    }
    if let Some(b) = route.bound() {
        debug_assert!(coloring.palette_size <= b);
    }
    Ok(ColoringCertificate {
        route,
        coloring,
        partition,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn dispatcher_routes() {
        let tree = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap();
        let c = star_color(&tree, false).unwrap();
        assert_eq!((c.route, c.palette_size()), (Route::Forest3, 3));

        let c = star_color(&cycle(5), false).unwrap();
        assert_eq!((c.route, c.palette_size()), (Route::ThmI, 4));
        assert!(c.verdict.ok);

        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(matches!(star_color(&k4, false), Err(ColorizeError::NotCovered(_))));
        let c = star_color(&k4, true).unwrap();
        assert_eq!((c.route, c.coloring.colors_used()), (Route::Exact, 4));
    }

    #[test]
    fn forced_routes() {
        let c6 = cycle(6);
        for choice in [RouteChoice::Thm1, RouteChoice::Thm2, RouteChoice::Thm3] {
            let c = star_color_via(&c6, choice).unwrap();
            assert!(c.verdict.ok);
            assert!(c.palette_size() <= c.route.bound().unwrap());
        }
        assert!(matches!(
            star_color_via(&cycle(5), RouteChoice::Thm2),
            Err(ColorizeError::NotCovered(_))
        ));
        assert!(matches!(
            star_color_via(&cycle(5), RouteChoice::Forest),
            Err(ColorizeError::NotCovered(_))
        ));
    }

    #[test]
    fn partition_coloring() {
        let c5 = cycle(5);
        let mut p = Partition::all_forest(&c5, Scheme::FI);
        p.set(0, Class::I1);
        let c = color_from_partition(&c5, &p).unwrap();
        assert_eq!(c.palette_size, 4);
        assert_eq!(c.color(0), Some(3));
        let bad = Partition::all_forest(&c5, Scheme::FI);
        assert!(matches!(
            color_from_partition(&c5, &bad),
            Err(ColorizeError::InvalidPartition(_))
        ));
    }
}
