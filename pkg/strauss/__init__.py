from strauss.core.closed_forms.bipodal import bipodal_entropy as bipodal_entropy
from strauss.core.closed_forms.bipodal import symmetric_bipodal as symmetric_bipodal
from strauss.core.closed_forms.corner import corner_coefficient as corner_coefficient
from strauss.core.closed_forms.corner import corner_embed as corner_embed
from strauss.core.closed_forms.sym21 import sym21_entropy as sym21_entropy
from strauss.core.closed_forms.sym21 import sym21_triangle as sym21_triangle
from strauss.core.closed_forms.tripodal import F as F
from strauss.core.closed_forms.tripodal import c_from_delta as c_from_delta
from strauss.core.closed_forms.tripodal import tripodal_ansatz as tripodal_ansatz
from strauss.core.domain.errors import StraussError as StraussError
from strauss.core.domain.graphon import StepGraphon as StepGraphon
from strauss.core.domain.params import NewtonOptions as NewtonOptions
from strauss.core.domain.params import Sym21Params as Sym21Params
from strauss.core.domain.phase import BranchLabel as BranchLabel
from strauss.core.domain.phase import DMode as DMode
from strauss.core.domain.phase import PhaseBoundaryRow as PhaseBoundaryRow
from strauss.core.domain.sweep import SweepTable as SweepTable
from strauss.core.explorer.boundary import boundary_curve as boundary_curve
from strauss.core.explorer.boundary import delta_max as delta_max
from strauss.core.explorer.boundary import trace_vs_delta as trace_vs_delta
from strauss.core.explorer.f_max import E0 as E0
from strauss.core.explorer.f_max import fm_curve as fm_curve
from strauss.core.explorer.f_max import maximize_F_at as maximize_F_at
from strauss.core.explorer.f_max import scaling_fit as scaling_fit
from strauss.core.explorer.small_e import classify_point as classify_point
from strauss.core.explorer.small_e import small_e_table as small_e_table
from strauss.core.explorer.small_e import theta1_crossing as theta1_crossing
from strauss.core.explorer.tripodal import best_tripodal as best_tripodal
from strauss.core.functionals.densities import edge_density as edge_density
from strauss.core.functionals.densities import triangle_density as triangle_density
from strauss.core.functionals.entropy import graphon_entropy as graphon_entropy
from strauss.core.functionals.entropy import h_entropy as h_entropy
