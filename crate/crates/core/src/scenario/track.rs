use alloc::collections::VecDeque;

/// Sections `0..=8`; 8 is the bypass-only section.
pub const NUM_SECTIONS: usize = 9;
/// Where trains choose between the loop and the bypass.
pub const DECISION_POINT: usize = 0;

const LOOP_ROUTE: [usize; 8] = [0, 1, 2, 3, 4, 5, 6, 7];
const BYPASS_ROUTE: [usize; 6] = [0, 1, 2, 8, 6, 7];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Loop,
    Bypass,
}

impl Route {
    /// Action index: 0 is "take loop", 1 "take bypass".
    pub fn index(self) -> usize {
        match self {
            Route::Loop => 0,
            Route::Bypass => 1,
        }
    }

    pub fn from_index(index: usize) -> Option<Route> {
        match index {
            0 => Some(Route::Loop),
            1 => Some(Route::Bypass),
            _ => None,
        }
    }
}

/// Outer loop `0→1→…→7→0` and the bypass `0→1→2→8→6→7→0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrackLayout;

impl TrackLayout {
    pub fn route(&self, route: Route) -> &'static [usize] {
        match route {
            Route::Loop => &LOOP_ROUTE,
            Route::Bypass => &BYPASS_ROUTE,
        }
    }

    pub fn decision_point(&self) -> usize {
        DECISION_POINT
    }

    /// Sections reachable in one step from `section`.
    pub fn successors(&self, section: usize) -> impl Iterator<Item = usize> {
        let layout = *self;
        [Route::Loop, Route::Bypass].into_iter().filter_map(move |r| {
            let path = layout.route(r);
            path.iter()
                .position(|&s| s == section)
                .map(|i| path[(i + 1) % path.len()])
        })
    }

    /// Fewest forward sections from `from` to `to` over either route.
    pub fn forward_distance(&self, from: usize, to: usize) -> Option<usize> {
        if from >= NUM_SECTIONS || to >= NUM_SECTIONS {
            return None;
        }
        let mut dist = [usize::MAX; NUM_SECTIONS];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(s) = queue.pop_front() {
            if s == to {
                return Some(dist[s]);
            }
            for next in self.successors(s) {
                if dist[next] == usize::MAX {
                    dist[next] = dist[s] + 1;
                    queue.push_back(next);
                }
            }
        }
        None
    }
}

/// Train 2 → Train 1 separation in sections: the shortest forward travel from
/// the pursuer's section to the agent's.
pub fn separation_distance(train1: usize, train2: usize) -> Option<usize> {
    TrackLayout.forward_distance(train2, train1)
}
