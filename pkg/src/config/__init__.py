"""
Configuration Module
===================

Central configuration for the project defining paths, engine caps, the
battery grid and the traceability table of every checked claim.

Key Components:
--------------
1. Base Paths:
   - ROOT: Project root directory
   - LOGS: Directory for application logs
   - DATA: Directory for data storage
   - INSTANCES: Directory for instance files (.inst)
   - REPORTS: Directory for JSON reports
   - SCHEMA_FILE: JSON schema every report is validated against

2. Engine Settings (ENGINE_SETTINGS):
   - characteristic: prime of the coefficient field
   - max_degree: cap for every potentially divergent Groebner loop
   - resample_attempts: attempts of the validate-and-resample loops
   - default_seed: seed used when no --seed is given

3. Battery Settings (BATTERY_SETTINGS):
   - grid: default parameter grid of `verify --battery`
   - seeds: seeds per grid point
   - workers: size of the worker pool

4. Recipes (RECIPES) and Claims (CLAIMS):
   - parameter schema of each `recipe` subcommand
   - claim id -> anchor string, quoted source statement and title, echoed in
     every report

Usage:
-----
from src.config import ENGINE_SETTINGS, CLAIMS

cap = ENGINE_SETTINGS["max_degree"]
anchor = CLAIMS["depth_dichotomy"]["anchor"]
"""

# Standard library imports
from pathlib import Path

# Local imports
from src.utils.path_utils import ensure_dirs_exist

# Define base paths
ROOT = Path(__file__).resolve().parent.parent.parent
LOGS = Path(ROOT, "logs")
DATA = Path(ROOT, "data")
INSTANCES = Path(DATA, "instances")
REPORTS = Path(DATA, "reports")
SCHEMA_FILE = Path(ROOT, "src", "schema", "report.schema.json")

REPORT_VERSION = "1.0"

# Define engine settings
ENGINE_SETTINGS = {
    "characteristic": 32003,
    "max_degree": 30,
    "resample_attempts": 8,
    "default_seed": 0,
}

# Define battery settings
BATTERY_SETTINGS = {
    "grid": "n<=4,r<=4,t<r",
    "seeds": 3,
    "workers": 4,
    # Twist of G in the generic battery family; sections then live in degree 0
    "section_twist": 3,
}

# Parameter schema of the recipes: name -> {param: (type, required)}
RECIPES = {
    "cotangent": {
        "description": "phi = (x0..xn) twisted, multiple section of the cotangent module",
        "params": {"n": (int, True), "t": (int, False), "twist": (int, False)},
    },
    "mk": {
        "description": "generic phi: R(-1)^(n+k) -> R^k with I(phi) = m^k",
        "params": {"n": (int, True), "k": (int, True), "t": (int, False)},
    },
    "null-correlation": {
        "description": "complete intersection phi with a non-vanishing paired Koszul section",
        "params": {"n": (int, True), "degrees": (list, True)},
    },
    "ag-embed": {
        "description": "general points X and a section vanishing on X, cotangent(twist)",
        "params": {"n": (int, True), "points": (int, True), "twist": (int, False)},
    },
}

# Claim id -> traceability anchor, quoted source statement and readable title
CLAIMS = {
    "depth_dichotomy": {
        "anchor": "locus/depth-parity",
        "quote": "if r+t is odd",
        "title": "depth R/I(psi) is n-r+1 for r+t odd and n-r for r+t even",
    },
    "cohomology_table": {
        "anchor": "locus/intermediate-ext",
        "quote": "if j = n+t-2i",
        "title": "intermediate Ext modules of R/I(psi) match the predicted table",
    },
    "unmixedness_parity": {
        "anchor": "locus/unmixed-parity",
        "quote": "unmixed if and only if",
        "title": "I(psi) is unmixed exactly when r+t is odd",
    },
    "saturation_defect": {
        "anchor": "locus/saturation",
        "quote": "is not saturated if",
        "title": "I(psi) is not saturated exactly when r = n and r+t is even",
    },
    "j_over_i": {
        "anchor": "locus/hull-quotient",
        "quote": "I = J \u2229 Q",
        "title": "Hilbert function of J/I matches the tensor product formula",
    },
    "classification": {
        "anchor": "locus/acm-ag",
        "quote": "equidimensional and locally Cohen-Macaulay",
        "title": "ACM / AG verdicts agree with the parity classification",
    },
    "cm_type_bound": {
        "anchor": "locus/cm-type",
        "quote": "Cohen-Macaulay type \u2264 1 +",
        "title": "computed Cohen-Macaulay type respects the bound",
    },
    "resolution_shape": {
        "anchor": "resolution/direct-and-dual-blocks",
        "quote": "graded free resolution of the form",
        "title": "minimal Betti table of R/J equals the predicted A_k + C_k table",
    },
    "gorenstein_symmetry": {
        "anchor": "resolution/self-dual",
        "quote": "X is arithmetically Gorenstein",
        "title": "odd rank, one section: self-dual resolution shape",
    },
    "even_rank_shape": {
        "anchor": "resolution/even-rank",
        "quote": "graded free resolution of the form",
        "title": "even rank, one section: resolution shape",
    },
    "en_homology": {
        "anchor": "complex/en-homology",
        "quote": "obtain the desired Eagon-Northcott complex",
        "title": "homology of E_. matches the predicted modules",
    },
    "dual_en_cohomology": {
        "anchor": "complex/dual-en-cohomology",
        "quote": "is exact if",
        "title": "cohomology of E_.* matches the predicted modules",
    },
    "canonical_depth": {
        "anchor": "canonical/depth",
        "quote": "the canonical module always satisfies",
        "title": "depth of K_X is at least min(n-r+t, n-r+2)",
    },
    "canonical_agreement": {
        "anchor": "canonical/hull-agreement",
        "quote": "The canonical modules of S and its top-dimensional part X are isomorphic",
        "title": "K_S and K_X have the same Hilbert function",
    },
    "tor_splitting": {
        "anchor": "module/tor-splitting",
        "quote": "is a direct summand of",
        "title": "Tor of the module embeds into Tor of its Ext modules",
    },
    "k_buchsbaum": {
        "anchor": "locus/k-buchsbaum",
        "quote": "k-Buchsbaum but not (k-1)-Buchsbaum",
        "title": "intermediate Ext modules are annihilated by exactly m^k",
    },
    "symmetric_duality": {
        "anchor": "module/symmetric-duality",
        "quote": "there are isomorphisms",
        "title": "Ext^{r+1}(S_i(M),R) matches S_{r-i}(M) twisted by R(-c1)",
    },
    "exterior_power_ext": {
        "anchor": "module/exterior-power-ext",
        "quote": "syzygy of the perfect module",
        "title": "Ext^j of the exterior powers of B* vanish below i and give S_i(M)",
    },
    "characterization": {
        "anchor": "module/single-ext",
        "quote": "is a reflexive Eilenberg-MacLane module",
        "title": "B_phi has a single non-vanishing Ext module",
    },
    "minimality_precondition": {
        "anchor": "section/non-minimal",
        "quote": "does not correspond to a minimal generator",
        "title": "the section avoids minimal generators of B_phi",
    },
    "section_ideal_routes": {
        "anchor": "section/ideal-routes",
        "quote": "Taking global sections we obtain",
        "title": "I(psi) from the lift equals I(psi) through the factored map",
    },
}

# Claim statuses used in reports
PASS = "PASS"
FAIL = "FAIL"
NOT_APPLICABLE = "NOT-APPLICABLE"

# Ensure directories exist
directories_to_ensure = [DATA, LOGS, INSTANCES, REPORTS]
ensure_dirs_exist(directories_to_ensure)
