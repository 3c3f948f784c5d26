# -*- coding: utf-8 -*-
#
# 2026 epicast contributors
#
# This file is part of epicast.
#
# epicast is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# epicast is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with epicast. If not, see <http://www.gnu.org/licenses/>.
#
#


from epiqbd.core.model import (
    Convention, Group, GroupMixture, PopulationState, Regime,
    RegimeParameters, RegimeSchedule, apportion_initial,
    effective_batch_size, event_rate)
from epiqbd.core.qbd import (
    BoundaryPolicy, LevelPartition, TruncatedGenerator, block_of,
    build_generator, build_levels)
from epiqbd.core.transient import (
    DistributionVector, Engine, ExpectedTrajectory, expected_active,
    mass_report, mean_trajectory, transient_distribution)
from epiqbd.core.simulation import (
    EnsembleSummary, ReplicationTrace, SimulationConfig, simulate_ensemble,
    simulate_once)
from epiqbd.core.estimation import (
    EstimationWindow, ParameterEstimate, detect_change_point, estimate,
    estimate_beta, estimate_mu, fit_weights, locate_reported_split,
    split_at_change_point)
from epiqbd.core.intervention import (
    KTransform, RhoCurve, Scenario, apply_scenario, rho_curve,
    scenario_report)
