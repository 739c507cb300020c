'''The module containing the sweep application: run configuration, the
subcommands and the exit status policy.

Every subcommand turns the configuration into independent tasks, runs them on
a mods.worker.Pool, merges the results in sorted task order and writes one
table per result kind plus manifest.json. Failed tasks and failed checks never
stop a sweep; they go to the manifest and raise the exit status.
'''

import json
import math
from dataclasses import dataclass, field, fields
from fractions import Fraction

import numpy as np

import mods.errors as me
import mods.exponents as mx
import mods.inequalities as mi
import mods.log as ml
import mods.modes as mm
import mods.reports as mr
import mods.specfun as sf
import mods.transforms as mt
import mods.worker as mw


# ----------------------------------------------------------------------------

COMMANDS = ("trace", "morawetz", "strichartz", "sobolev", "divergence", "exponents", "verify-all")
FORMATS = ("csv", "json")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_TOLERANCE = 3
EXIT_BUDGET = 4
EXIT_CODES = {"ToleranceError": EXIT_TOLERANCE, "DomainError": EXIT_TOLERANCE, "WindowError": EXIT_TOLERANCE,
    "DivergenceError": EXIT_TOLERANCE, "ModeOverflowError": EXIT_TOLERANCE, "BudgetError": EXIT_BUDGET,
    "AccuracyError": EXIT_BUDGET, "TailToleranceError": EXIT_BUDGET, "WorkerError": EXIT_BUDGET}

TOLERANCES = {"trace": 1e-6, "stirling": 2e-2, "morawetz": 5e-3, "profile": 1e-3, "strichartz": 1e-2,
    "scale": 1e-3, "sobolev": 1e-6, "slope": 0.1, "increment": 0.05, "exponents": 1e-12,
    "interpolation": 1e-10, "transforms": 1e-8}

PROFILES = {"gaussian": mm.GaussianProfile(), "gaussian-m2": mm.GaussianProfile(power=2, sigma=0.5)}

TRACE_COLUMNS = ("n", "b", "k", "c_closed", "c_quadrature", "relative_error", "ck_scaled", "stirling_limit", "v_k", "passed")
BOUND_COLUMNS = ("n", "b", "k_max", "inf_v", "sup_v", "stirling_limit", "gap", "passed")
MORAWETZ_COLUMNS = mi.CSV_COLUMNS + ("profile", "exact", "bracket_exact", "relative_error", "passed")
SPREAD_COLUMNS = ("n", "b", "a", "k", "profiles", "spread", "passed")
STRICHARTZ_COLUMNS = mi.CSV_COLUMNS + ("ratio_scaled", "scale_error", "exact", "relative_error", "passed")
SOBOLEV_COLUMNS = mi.CSV_COLUMNS + ("variant", "s", "ratio_half", "ratio_double", "scale_error", "passed")
DIVERGENCE_COLUMNS = ("n", "b", "k", "cutoff", "value")
SUMMARY_COLUMNS = ("n", "b", "k", "statistic", "value", "reference", "relative_error", "passed")
EXPONENT_COLUMNS = ("equation", "n", "quantity", "p", "q", "r", "value", "holds", "detail")
CALCULUS_COLUMNS = ("check", "n", "p", "q", "r", "value", "reference", "error", "passed")
HEALTH_COLUMNS = ("check", "n", "k", "t", "value", "tolerance", "passed")
VERIFY_COLUMNS = ("check", "cases", "failures", "passed")

SLOPE_CUTOFFS = (1e2, 1e3, 1e4)
DECADE_CUTOFFS = (1e-2, 1e-3, 1e-4)
WINDOW_POINTS = 20
SCAN_POINTS = 200001
HEALTH_GRID = mt.RadialGrid.covering(1e-6, 64.0, 0.25, knee=1.0)


@dataclass
class RunConfig:
    '''The complete description of one run; two equal configs give byte-identical reports.

    b_list: Explicit weight exponents; when None the grid 1 + j*b_step is used.
        Either way b is kept for dimension n only when 1+b_margin <= b <= n-b_margin.
    k_max: Largest degree of the trace tables.
    k_list: Degrees of the simulated commands.
    k_bounds: Largest degree of the equivalence bounds.
    r_exp_list: Exponents r of the weighted Strichartz sweep; "inf" allowed.
    tolerances: Overrides of TOLERANCES by name.
    equation: Equations queried by the exponents command.
    p, q, r: Optional exponents of the exponents command, as numbers or text ("5/2").
    p_list: Powers of the NLS window table; a grid inside (p_l, p_L2) when None.
    function: Path of a text records file (see mods.modes.loads_spectral). When given,
        trace, morawetz, strichartz and sobolev run on its components instead of the
        built-in profiles and k_list, and n_list becomes its dimension. verify-all ignores it.
    '''
    command: str = "verify-all"
    n_list: list = field(default_factory=lambda: [2, 3, 4])
    b_list: list = None
    b_step: float = 0.25
    b_margin: float = 0.1
    a_list: list = field(default_factory=lambda: [1.0, 2.0])
    k_max: int = 20
    k_list: list = field(default_factory=lambda: [0, 1, 3])
    k_bounds: int = 200
    r_exp_list: list = field(default_factory=lambda: [2.0, 4.0, math.inf])
    horizon: float = mi.HORIZON
    radial_density: float = 1.0
    tolerances: dict = field(default_factory=dict)
    output: str = "reports"
    format: str = "csv"
    jobs: int = 1
    logg: str = "WARNING"
    equation: list = field(default_factory=lambda: ["wave", "schrodinger"])
    p: object = None
    q: object = None
    r: object = None
    p_list: list = None
    function: str = None

    @classmethod
    def load(cls, path: str = None, overrides: dict = None):
        '''Returns the validated RunConfig of a JSON file with command-line overrides on top.'''
        values = {}
        if path is not None:
            try:
                with open(path, "r", encoding="utf-8") as handle:
                    values = json.load(handle)
            except (OSError, json.JSONDecodeError) as error:
                raise me.UsageError(f"cannot read run configuration {path}: {error}")
            if not isinstance(values, dict):
                raise me.UsageError(f"run configuration {path} must hold a JSON object")
        for key, value in (overrides or {}).items():
            if value is not None:
                values[key] = value
        names = {item.name for item in fields(cls)}
        unknown = sorted(set(values) - names)
        if unknown:
            raise me.UsageError(f"unknown configuration keys: {', '.join(unknown)}")
        config = cls(**values)
        config.validate()
        return config

    def validate(self):
        '''Normalises the fields in place; raises UsageError on the first invalid one.'''
        def usage(condition, message):
            if not condition:
                raise me.UsageError(message)

        usage(self.command in COMMANDS, f"command must be one of {COMMANDS}, got {self.command!r}")
        usage(self.format in FORMATS, f"format must be one of {FORMATS}, got {self.format!r}")
        usage(self.logg in ml.LEVELS, f"logg must be one of {tuple(ml.LEVELS)}, got {self.logg!r}")
        self.n_list = _integers(self.n_list, "n_list", least=2)
        self.k_list = _integers(self.k_list, "k_list", least=0)
        self.records = None
        if self.function is not None:
            usage(isinstance(self.function, str), f"function must be a path, got {self.function!r}")
            try:
                with open(self.function, "r", encoding="utf-8") as handle:
                    self.records = mm.loads_spectral(handle.read())
            except OSError as error:
                raise me.UsageError(f"cannot read function records {self.function}: {error}")
            except me.ToolkitError as error:
                raise me.UsageError(f"invalid function records {self.function}: {error}")
            self.n_list = [self.records.n]
        usage(_is_integer(self.k_max) and self.k_max >= 0, f"k_max must be an integer >= 0, got {self.k_max}")
        usage(_is_integer(self.k_bounds) and self.k_bounds >= 10, f"k_bounds must be an integer >= 10, got {self.k_bounds}")
        usage(_is_integer(self.jobs) and self.jobs >= 1, f"jobs must be a positive integer, got {self.jobs}")
        self.k_max, self.k_bounds, self.jobs = int(self.k_max), int(self.k_bounds), int(self.jobs)
        self.a_list = _reals(self.a_list, "a_list")
        usage(all(a > 0 for a in self.a_list), f"a_list must be positive, got {self.a_list}")
        self.r_exp_list = _reals(self.r_exp_list, "r_exp_list")
        usage(all(r >= 2 for r in self.r_exp_list), f"r_exp_list must lie in [2, inf], got {self.r_exp_list}")
        self.b_step, self.b_margin = _real(self.b_step), _real(self.b_margin)
        self.horizon, self.radial_density = _real(self.horizon), _real(self.radial_density)
        usage(self.b_step > 0 and 0 <= self.b_margin < 0.5, "b_step must be positive and b_margin in [0, 1/2)")
        if self.b_list is not None:
            self.b_list = _reals(self.b_list, "b_list")
        usage(self.horizon > 1 and self.radial_density > 0, "horizon must exceed 1 and radial_density must be positive")
        usage(isinstance(self.tolerances, dict), "tolerances must be an object")
        unknown = sorted(set(self.tolerances) - set(TOLERANCES))
        usage(not unknown, f"unknown tolerances: {', '.join(unknown)}")
        usage(all(_real(value) > 0 for value in self.tolerances.values()), f"tolerances must be positive, got {self.tolerances}")
        self.tolerances = {**TOLERANCES, **{key: float(value) for key, value in self.tolerances.items()}}
        if isinstance(self.equation, str):
            self.equation = [self.equation]
        usage(len(self.equation) > 0 and all(eq in mx.EQUATIONS for eq in self.equation),
            f"equation must name some of {mx.EQUATIONS}, got {self.equation}")
        self.equation = sorted(set(self.equation), key=mx.EQUATIONS.index)
        try:
            self.p, self.q, self.r = (None if x is None else mx.number(x) for x in (self.p, self.q, self.r))
            if self.p_list is not None:
                self.p_list = [mx.number(p) for p in self.p_list]
        except (me.DomainError, ValueError) as error:
            raise me.UsageError(f"invalid exponent: {error}")
        if self.command in ("trace", "morawetz", "strichartz", "sobolev"):
            usage(any(self.b_grid(n) for n in self.n_list),
                f"the b grid is empty for every n in {self.n_list} (margin {self.b_margin})")

    def b_grid(self, n: int):
        '''Returns the sorted weight exponents used in dimension n.'''
        if self.b_list is not None:
            candidates = self.b_list
        else:
            candidates = [1.0 + j*self.b_step for j in range(1, int(math.floor((n - 1.0)/self.b_step)) + 1)]
        low, high = 1.0 + self.b_margin, n - self.b_margin
        return sorted({b for b in candidates if low - 1e-12 <= b <= high + 1e-12 and 1.0 < b < n})


def _is_integer(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool) and int(value) == value


def _real(value):
    if isinstance(value, str):
        value = value.strip().lower()
        if value in ("inf", "infinity"):
            return math.inf
    try:
        return float(value)
    except (TypeError, ValueError):
        raise me.UsageError(f"expected a number, got {value!r}")


def _reals(values, name: str):
    if not isinstance(values, (list, tuple)):
        values = [values]
    if len(values) == 0:
        raise me.UsageError(f"{name} must not be empty")
    return [_real(value) for value in values]


def _integers(values, name: str, least: int):
    if not isinstance(values, (list, tuple)):
        values = [values]
    if len(values) == 0:
        raise me.UsageError(f"{name} must not be empty")
    if not all(_is_integer(value) and value >= least for value in values):
        raise me.UsageError(f"{name} must hold integers >= {least}, got {values}")
    return sorted({int(value) for value in values})


# ----------------------------------------------------------------------------
# Outcomes: the tables a command produced and the failures it collected.

@dataclass
class Table:
    name: str
    columns: tuple
    rows: list = field(default_factory=list)


@dataclass
class Outcome:
    tables: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def table(self, name: str, columns):
        for table in self.tables:
            if table.name == name:
                return table
        table = Table(name, tuple(columns))
        self.tables.append(table)
        return table

    def fail(self, key, error: str, text: str):
        self.failures.append({"key": _key_text(key), "error": error, "text": text})

    def check(self, key, rows, what: str):
        '''Adds a ToleranceError failure for every row whose passed flag is false.'''
        for row in rows:
            if row.get("passed") is False:
                self.fail(key, "ToleranceError", f"{what} failed: " + ", ".join(f"{column}={mr.cell(row[column])}"
                    for column in row if column not in ("passed",)))

    def merge(self, other: "Outcome"):
        for table in other.tables:
            self.table(table.name, table.columns).rows.extend(table.rows)
        self.failures.extend(other.failures)


def _key_text(key):
    if isinstance(key, tuple):
        return " ".join(mr.cell(part) for part in key)
    return str(key)


def _collect(pool: mw.Pool, tasks, outcome: Outcome, what: str):
    '''Runs tasks and adds their {table: rows} results to outcome in sorted key order.'''
    results, failures = pool.run(tasks)
    for key in sorted(results):
        for name, (columns, rows) in sorted(results[key].items()):
            outcome.table(name, columns).rows.extend(rows)
            outcome.check(key, rows, what)
    for key in sorted(failures):
        error, text = failures[key]
        outcome.fail(key, error, text)
    return outcome


def status(failures):
    '''Returns the exit status implied by a list of failures.'''
    return max((EXIT_CODES.get(failure["error"], EXIT_BUDGET) for failure in failures), default=EXIT_OK)


# ----------------------------------------------------------------------------
# Tasks. Module-level so they pickle; each returns {table name: (columns, rows)}.

def trace_task(n: int, b: float, k_max: int, k_bounds: int, tolerance: float, stirling: float, degrees=None):
    limit = mi.stirling_limit(b)
    rows = []
    for k in (range(k_max + 1) if degrees is None else degrees):
        closed = mi.trace_mode_constant(n, b, k)
        quadrature = mi.trace_mode_constant(n, b, k, "quadrature")
        error = abs(quadrature - closed)/closed
        rows.append({"n": n, "b": b, "k": k, "c_closed": closed, "c_quadrature": quadrature,
            "relative_error": error, "ck_scaled": closed*k**(b - 1.0) if k > 0 else None,
            "stirling_limit": limit, "v_k": (2.0*math.pi)**n*mm.Mode(n, k).lam**(b - 1.0)*closed,
            "passed": error <= tolerance})
    bounds = mi.equivalence_bounds(n, b, k_bounds)
    bound = {"n": n, "b": b, "k_max": bounds.k_max, "inf_v": bounds.inf_v, "sup_v": bounds.sup_v,
        "stirling_limit": bounds.stirling_limit, "gap": bounds.gap, "passed": bounds.gap <= stirling}
    return {"trace": (TRACE_COLUMNS, rows), "trace_bounds": (BOUND_COLUMNS, [bound])}


def _function(n: int, k: int, profile: str, records):
    if records is not None:
        return records
    return mm.SpectralFunction.single(n, k, PROFILES[profile])


def _validated(f, b: float, a: float, tolerance: float, horizon: float, density: float):
    '''Returns (report, passed) of the Morawetz cross-validation of f.'''
    try:
        _, report = mi.cross_validate_function(f, b, a, tolerance=tolerance, horizon=horizon, density=density)
    except me.ToleranceError as error:
        if error.report is None:
            raise
        return error.report, False
    return report, True


def morawetz_task(n: int, b: float, a: float, k: int, profile: str, tolerance: float, horizon: float, density: float,
        records=None):
    f = _function(n, k, profile, records)
    report, passed = _validated(f, b, a, tolerance, horizon, density)
    row = {**report.row(), "profile": profile, "exact": report.extras["exact"],
        "bracket_exact": mi.morawetz_ratio_exact(f, b, a, "bracket-k"),
        "relative_error": report.extras["relative_error"], "passed": passed}
    return {"morawetz": (MORAWETZ_COLUMNS, [row])}


def strichartz_task(n: int, b: float, a: float, k: int, r_exp: float, tolerance: float, scale: float,
        horizon: float, density: float, records=None):
    f = _function(n, k, "gaussian", records)
    report = mi.weighted_strichartz_ratio(f, b, a, r_exp, horizon=horizon, density=density)
    scaled = mi.weighted_strichartz_ratio(f.dilate(2.0), b, a, r_exp, horizon=horizon, density=density)
    scale_error = abs(scaled.ratio/report.ratio - 1.0)
    passed = math.isfinite(report.ratio) and scale_error <= scale
    exact, error = None, None
    if r_exp == 2:
        validated, passed_exact = _validated(f, b, a, tolerance, horizon, density)
        exact = validated.extras["exact"]
        error = abs(report.ratio**2/exact - 1.0)
        passed = passed and passed_exact and error <= tolerance
    row = {**report.row(), "ratio_scaled": scaled.ratio, "scale_error": scale_error, "exact": exact,
        "relative_error": error, "passed": passed}
    return {"strichartz": (STRICHARTZ_COLUMNS, [row])}


def sobolev_task(n: int, b: float, k: int, variant: str, tolerance: float, records=None):
    s = 0.5*(n - b) + 0.25 if variant == "zonal-infty" else None
    f = _function(n, k, "gaussian", records)
    report = mi.sobolev_trace_ratio(f, b, variant, s)
    half = mi.sobolev_trace_ratio(f.dilate(0.5), b, variant, s).ratio
    double = mi.sobolev_trace_ratio(f.dilate(2.0), b, variant, s).ratio
    scale_error = max(abs(half/report.ratio - 1.0), abs(double/report.ratio - 1.0))
    row = {**report.row(), "variant": variant, "s": s, "ratio_half": half, "ratio_double": double,
        "scale_error": scale_error, "passed": math.isfinite(report.ratio) and scale_error <= tolerance}
    return {"sobolev": (SOBOLEV_COLUMNS, [row])}


def divergence_task(n: int, b: float, k: int, slope: float, increment: float):
    if b == n:
        points = mi.endpoint_divergence_probe(n, b, k, DECADE_CUTOFFS)
        steps = [points[i + 1][1] - points[i][1] for i in range(len(points) - 1)]
        reference = math.log(10.0)/(2.0**(n - 2)*math.exp(2.0*sf.log_gamma(0.5*n)))
        error = abs(steps[-1]/steps[-2] - 1.0)
        summary = {"n": n, "b": b, "k": k, "statistic": "decade_increment", "value": steps[-1],
            "reference": reference, "relative_error": error, "passed": error <= increment}
    else:
        points = mi.endpoint_divergence_probe(n, b, k, SLOPE_CUTOFFS)
        value = mi.divergence_slope(points)
        error = abs(value*math.pi - 1.0)
        summary = {"n": n, "b": b, "k": k, "statistic": "log_slope", "value": value, "reference": 1.0/math.pi,
            "relative_error": error, "passed": error <= slope}
    rows = [{"n": n, "b": b, "k": k, "cutoff": cutoff, "value": value} for cutoff, value in points]
    return {"divergence": (DIVERGENCE_COLUMNS, rows), "divergence_summary": (SUMMARY_COLUMNS, [summary])}


def _exponent_row(equation, n, quantity, value=None, holds=None, detail="", p=None, q=None, r=None):
    return {"equation": equation, "n": n, "quantity": quantity, "p": p, "q": q, "r": r, "value": value,
        "holds": holds, "detail": detail}


def _guarded(rows, build, equation, n, quantity, **exponents):
    '''Appends the rows of build(), or one row carrying the violated window.'''
    try:
        rows.extend(build())
    except me.DomainError as error:
        rows.append(_exponent_row(equation, n, quantity, holds=False, detail=str(error), **exponents))


def wave_rows(n: int, p=None, q=None, r=None):
    '''Returns the exponent rows of the wave equation in dimension n.'''
    exponents = mx.wave_exponents(n)
    rows = [_exponent_row("wave", n, "p_conf", exponents.p_conf), _exponent_row("wave", n, "p_h", exponents.p_h),
        _exponent_row("wave", n, "p_c", exponents.p_c),
        _exponent_row("wave", n, "s_c(p_c)", float(exponents.s_c(exponents.p_c))),
        _exponent_row("wave", n, "s_sb(p_c)", float(exponents.s_sb(exponents.p_c)))]
    if n in (2, 3):
        endpoint = mx.endpoint_angular_strichartz(n)
        rows.append(_exponent_row("wave", n, "endpoint_derivative", endpoint.derivative, q=endpoint.q, r=endpoint.r,
            detail=f"angular index > {mx.exact_text(endpoint.angular)}"))
    if p is not None:
        rows += [_exponent_row("wave", n, "s_c", exponents.s_c(p), p=p), _exponent_row("wave", n, "s_sb", exponents.s_sb(p), p=p)]

        def strauss():
            setup = mx.strauss_setup(n, p)
            return [_exponent_row("wave", n, f"strauss_{name}", getattr(setup, name), p=p)
                for name in ("alpha", "s1", "s2", "moser_a")] + [_exponent_row("wave", n, "strauss", holds=setup.valid, p=p,
                detail=", ".join(f"{name}={mr.cell(getattr(setup, name))}" for name in ("supercritical", "weighted_window",
                "moser_window", "dual_window", "moser_regularity")))]

        def lindblad_sogge():
            setup = mx.lindblad_sogge_setup(n, p)
            return [_exponent_row("wave", n, "lindblad_sogge_q", setup.q, p=p),
                _exponent_row("wave", n, "lindblad_sogge_s1", setup.s1_threshold, p=p, detail="angular regularity must exceed"),
                _exponent_row("wave", n, "lindblad_sogge", holds=setup.valid, p=p, q=setup.q, r=setup.q,
                detail=", ".join(f"{name}={mr.cell(getattr(setup, name))}" for name in ("in_range", "window", "dual_ok", "inhomogeneous")))]

        _guarded(rows, strauss, "wave", n, "strauss", p=p)
        _guarded(rows, lindblad_sogge, "wave", n, "lindblad_sogge", p=p)
    if q is not None:
        def harmse_oberlin():
            in_window, dual = mx.harmse_oberlin_check(q, n)
            return [_exponent_row("wave", n, "harmse_oberlin", dual, holds=in_window, q=q, detail="value is the source exponent r")]

        _guarded(rows, harmse_oberlin, "wave", n, "harmse_oberlin", q=q)
    if q is not None and r is not None:
        rows += _pair_rows("wave", n, q, r)
        _guarded(rows, lambda: _interpolation_rows(n, q, r), "wave", n, "interpolation", q=q, r=r)
        if q == r:
            _guarded(rows, lambda: [_angular_row("wave", n, mx.angular_qr_strichartz(n, 1, r, 2))], "wave", n, "angular_qr", q=q, r=r)
    return rows


def schrodinger_rows(n: int, p=None, q=None, r=None):
    '''Returns the exponent rows of the Schrodinger equation in dimension n.'''
    exponents = mx.schrodinger_exponents(n)
    rows = [_exponent_row("schrodinger", n, "p_L2", exponents.p_L2), _exponent_row("schrodinger", n, "p_l", exponents.p_l)]
    if p is not None:
        rows.append(_exponent_row("schrodinger", n, "s_c", exponents.s_c(p), p=p))
        if n >= 3:
            window = mx.nls_q_window(n, p)
            rows.append(_exponent_row("schrodinger", n, "nls_q_window", holds=not window.empty, p=p,
                detail=f"{window.variable} in {window.intersection}; {window.interval_list()}"))
            if q is not None:
                def nls():
                    setup = mx.nls_setup(n, p, q)
                    return [_exponent_row("schrodinger", n, f"nls_{name}", getattr(setup, name), p=p, q=q)
                        for name in ("alpha", "s1", "s2", "s3")] + [_exponent_row("schrodinger", n, "nls", holds=setup.in_window, p=p, q=q)]
                _guarded(rows, nls, "schrodinger", n, "nls", p=p, q=q)
    if q is not None and r is not None:
        rows += _pair_rows("schrodinger", n, q, r)
        rows.append(_exponent_row("schrodinger", n, "keel_tao", holds=mx.keel_tao_admissible(q, r, n), q=q, r=r))
        if q == r and n >= 3:
            _guarded(rows, lambda: [_angular_row("schrodinger", n, mx.schrodinger_angular_strichartz(n, r))],
                "schrodinger", n, "angular_qr", q=q, r=r)
    return rows


def _pair_rows(equation: str, n: int, q, r):
    admissible, reason = mx.classical_admissible(equation, q, r, n)
    rows = [_exponent_row(equation, n, "classical", holds=admissible, q=q, r=r, detail=reason)]

    def generalized():
        window = mx.generalized_window(equation, q, r, n)
        return [_exponent_row(equation, n, "generalized_s", window.s, q=q, r=r),
            _exponent_row(equation, n, "generalized_s_kn", window.s_kn, holds=window.in_window, q=q, r=r,
            detail=window.window + ("; conjectural" if window.conjectural else ""))]

    _guarded(rows, generalized, equation, n, "generalized", q=q, r=r)
    return rows


def _interpolation_rows(n: int, q, r):
    record = mx.interpolation_bookkeeping(n, q, r)
    return [_exponent_row("wave", n, "interpolation_t", record.t_eta, holds=record.condition_met, q=q, r=r),
        _exponent_row("wave", n, "interpolation_limit", record.limit, q=q, r=r, detail=f"s_kn = {mx.exact_text(record.s_kn)}")]


def _angular_row(equation: str, n: int, estimate: mx.AngularStrichartz):
    detail = f"angular index {'>' if estimate.strict else '>='} {mx.exact_text(estimate.angular)}"
    if estimate.weight_b is not None:
        detail += f"; weight b = {mx.exact_text(estimate.weight_b)}"
    return _exponent_row(equation, n, "angular_derivative", estimate.derivative, q=estimate.q, r=estimate.r, detail=detail)


def window_grid(n: int, points: int = WINDOW_POINTS):
    '''Returns points powers strictly inside the interval between p_l and p_L2.'''
    exponents = mx.schrodinger_exponents(n)
    lo, hi = sorted((float(exponents.p_l), float(exponents.p_L2)))
    return [lo + (j + 1)*(hi - lo)/(points + 1) for j in range(points)]


def exponents_task(n: int, equations, p=None, q=None, r=None, p_list=None):
    rows = []
    if "wave" in equations:
        rows += wave_rows(n, p, q, r)
    if "schrodinger" in equations:
        rows += schrodinger_rows(n, p, q, r)
    result = {"exponents": (EXPONENT_COLUMNS, rows)}
    if "schrodinger" in equations and n >= 3:
        result["windows"] = (mx.WINDOW_COLUMNS, mx.nls_window_rows(n, p_list if p_list is not None else window_grid(n)))
    return result


def window_scan(n: int, p):
    '''Returns whether a brute-force scan of 2/q over (0, 1] meets every NLS constraint.'''
    x = np.linspace(0.0, 1.0, SCAN_POINTS)[1:]
    inside = np.ones_like(x, dtype=bool)
    for interval in mx.nls_q_window(n, p).constraints:
        lo, hi = float(interval.lo), float(interval.hi)
        inside &= (x >= lo) if interval.lo_closed else (x > lo)
        inside &= (x <= hi) if interval.hi_closed else (x < hi)
    return bool(inside.any())


def calculus_task(tolerance: float, interpolation: float):
    rows = []
    p_c = mx.wave_exponents(3).p_c
    error = abs(p_c - (1.0 + math.sqrt(2.0)))
    rows.append({"check": "p_c", "n": 3, "value": p_c, "reference": 1.0 + math.sqrt(2.0), "error": error,
        "passed": error <= tolerance})
    for n in range(2, 9):
        exponents = mx.wave_exponents(n)
        s_c, s_sb = float(exponents.s_c(exponents.p_c)), float(exponents.s_sb(exponents.p_c))
        rows.append({"check": "s_c=s_sb", "n": n, "p": exponents.p_c, "value": s_c, "reference": s_sb,
            "error": abs(s_c - s_sb), "passed": abs(s_c - s_sb) <= tolerance})
    for q, alpha, n, a in ((4, Fraction(1, 4), 3, 1), (6, Fraction(1, 3), 3, 2), (3, Fraction(1, 2), 4, 2), (5, Fraction(1, 5), 2, 1)):
        params = mx.weighted_strichartz_params(q, alpha, n, a)
        value, reference = params.s + params.s1, Fraction(a, q) - Fraction(1, 2)
        rows.append({"check": "s+s1", "n": n, "q": q, "value": value, "reference": reference,
            "error": abs(value - reference), "passed": value == reference})
    for n in range(3, 8):
        for p in window_grid(n):
            empty = mx.nls_q_window(n, p).empty
            scanned = window_scan(n, p)
            expected = not empty if n <= 6 else False
            rows.append({"check": "nls_window", "n": n, "p": p, "value": not empty, "reference": scanned,
                "passed": (not empty) == scanned == expected})
    samples = ((2, 3, math.inf), (2, 4, math.inf), (3, 2, 6), (3, 2, math.inf), (4, 2, 4), (4, 2, 6),
        (5, 2, 3), (5, 2, 4), (6, 2, 3), (6, 2, Fraction(10, 3)))
    for n, q, r in samples:
        record = mx.interpolation_bookkeeping(n, q, r)
        error = abs(float(record.limit) - float(record.s_kn))
        rows.append({"check": "interpolation", "n": n, "q": q, "r": r, "value": record.limit,
            "reference": record.s_kn, "error": error, "passed": error <= interpolation})
    return {"calculus": (CALCULUS_COLUMNS, rows)}


def health_task(tolerance: float):
    grid = HEALTH_GRID
    rows = []
    mode = mm.Mode(3, 1)
    physical = mm.GaussianProfile(power=1, side="physical")
    original = physical(grid.nodes)
    back = mt.hankel_inverse(mt.hankel_forward(physical, mode, grid), mode, grid)
    error = mt.radial_l2_norm(back.values - original, grid, 3)/mt.radial_l2_norm(original, grid, 3)
    rows.append({"check": "hankel_round_trip", "n": 3, "k": 1, "value": error, "tolerance": tolerance,
        "passed": error <= tolerance})
    for n, k in ((2, 0), (3, 1)):
        f = mm.SpectralFunction.single(n, k, mm.GaussianProfile())
        component = f.components[0]
        norm = mm.spectral_sobolev_norm(f, 0.0, 0.0)
        physical_norm = mt.radial_l2_norm(mt.physical_values(component, grid.nodes), grid, n)
        error = abs(physical_norm/norm - 1.0)
        rows.append({"check": "plancherel", "n": n, "k": k, "value": error, "tolerance": tolerance,
            "passed": error <= tolerance})
        for t in (0.5, 2.0):
            moved = mt.radial_l2_norm(mt.propagate_mode(component, 2.0, t, grid.nodes), grid, n)
            error = abs(moved/physical_norm - 1.0)
            rows.append({"check": "unitarity", "n": n, "k": k, "t": t, "value": error, "tolerance": tolerance,
                "passed": error <= tolerance})
    return {"health": (HEALTH_COLUMNS, rows)}


# ----------------------------------------------------------------------------
# Commands. Each turns a config into tasks and returns an Outcome.

def _simulated(config: RunConfig, n: int):
    '''Returns the (k, profile names) pairs simulated in dimension n.'''
    if config.records is not None:
        return [("records", ("records",))]
    return [(k, tuple(sorted(PROFILES))) for k in config.k_list]


def command_trace(config: RunConfig, pool: mw.Pool):
    degrees = None if config.records is None else config.records.degrees
    tasks = [(("trace", n, b), trace_task, {"n": n, "b": b, "k_max": config.k_max, "k_bounds": config.k_bounds,
        "tolerance": config.tolerances["trace"], "stirling": config.tolerances["stirling"], "degrees": degrees})
        for n in config.n_list for b in config.b_grid(n)]
    return _collect(pool, tasks, Outcome(), "trace check")


def command_morawetz(config: RunConfig, pool: mw.Pool):
    # b varies fastest so consecutive tasks share one cached simulation
    tasks = [(("morawetz", n, b, a, k, profile), morawetz_task, {"n": n, "b": b, "a": a,
        "k": None if k == "records" else k, "profile": profile, "tolerance": config.tolerances["morawetz"],
        "horizon": config.horizon, "density": config.radial_density, "records": config.records})
        for n in config.n_list for a in config.a_list for k, profiles in _simulated(config, n)
        for profile in profiles for b in config.b_grid(n)]
    outcome = _collect(pool, tasks, Outcome(), "Morawetz check")
    groups = {}
    for row in outcome.table("morawetz", MORAWETZ_COLUMNS).rows:
        groups.setdefault((row["n"], row["b"], row["a"], row["k"]), []).append(row)
    spreads = outcome.table("morawetz_profiles", SPREAD_COLUMNS)
    for (n, b, a, k), rows in sorted(groups.items()):
        if len(rows) < 2:
            continue
        squares = [row["ratio"]**2 for row in rows]
        spread = max(squares)/min(squares) - 1.0
        row = {"n": n, "b": b, "a": a, "k": k, "profiles": ";".join(r["profile"] for r in rows), "spread": spread,
            "passed": spread <= config.tolerances["profile"]}
        spreads.rows.append(row)
        outcome.check(("morawetz-profiles", n, b, a, k), [row], "profile independence")
    return outcome


def command_strichartz(config: RunConfig, pool: mw.Pool):
    tasks = [(("strichartz", n, b, a, k, r_exp), strichartz_task, {"n": n, "b": b, "a": a,
        "k": None if k == "records" else k, "r_exp": r_exp, "tolerance": config.tolerances["strichartz"],
        "scale": config.tolerances["scale"], "horizon": config.horizon, "density": config.radial_density,
        "records": config.records})
        for n in config.n_list for a in config.a_list for k, _ in _simulated(config, n)
        for b in config.b_grid(n) for r_exp in sorted(config.r_exp_list)]
    return _collect(pool, tasks, Outcome(), "weighted Strichartz check")


def command_sobolev(config: RunConfig, pool: mw.Pool):
    tasks = []
    for n in config.n_list:
        variants = mi.SOBOLEV_VARIANTS
        if n not in (2, 3) or (config.records is not None and any(c.weight != 1 for c in config.records.components)):
            variants = tuple(v for v in mi.SOBOLEV_VARIANTS if v != "zonal-infty")
        tasks += [(("sobolev", n, b, k, variant), sobolev_task, {"n": n, "b": b, "k": None if k == "records" else k,
            "variant": variant, "tolerance": config.tolerances["sobolev"], "records": config.records})
            for b in config.b_grid(n) for k, _ in _simulated(config, n) for variant in variants]
    return _collect(pool, tasks, Outcome(), "Sobolev scale check")


def command_divergence(config: RunConfig, pool: mw.Pool):
    arguments = {"slope": config.tolerances["slope"], "increment": config.tolerances["increment"]}
    tasks = [(("divergence", n, 1.0, k), divergence_task, {"n": n, "b": 1.0, "k": k, **arguments})
        for n in config.n_list for k in config.k_list]
    tasks += [(("divergence", n, float(n), 0), divergence_task, {"n": n, "b": float(n), "k": 0, **arguments})
        for n in config.n_list]
    return _collect(pool, tasks, Outcome(), "divergence check")


def command_exponents(config: RunConfig, pool: mw.Pool):
    tasks = [(("exponents", n), exponents_task, {"n": n, "equations": tuple(config.equation), "p": config.p,
        "q": config.q, "r": config.r, "p_list": config.p_list}) for n in config.n_list]
    return _collect(pool, tasks, Outcome(), "exponent check")


ACCEPTANCE = {
    "trace": {"n_list": [2, 3, 4], "b_list": None, "b_step": 0.25, "b_margin": 0.1, "k_max": 20, "k_bounds": 200},
    "morawetz": {"n_list": [2, 3], "b_list": [1.5, 2.0], "a_list": [1.0, 2.0], "k_list": [0, 1, 3]},
    "strichartz": {"n_list": [2, 3], "b_list": [1.5], "a_list": [1.0, 2.0], "k_list": [0, 1, 3],
        "r_exp_list": [2.0, 4.0, math.inf]},
    "sobolev": {"n_list": [2, 3, 4], "b_list": None, "b_step": 0.5, "b_margin": 0.1, "k_list": [0, 1, 3]},
    "divergence": {"n_list": [2, 3, 4], "k_list": [0, 1]},
    "exponents": {"n_list": [2, 3, 4, 5, 6, 7, 8], "equation": ["wave", "schrodinger"], "p_list": None},
}


def command_verify_all(config: RunConfig, pool: mw.Pool):
    '''Runs every command on its acceptance parameters plus the calculus and transform checks.'''
    outcome = Outcome()
    summary = []
    parts = [(name, COMMAND_FUNCTIONS[name], overrides) for name, overrides in ACCEPTANCE.items()]
    for name, function, overrides in parts:
        part = function(_replaced(config, name, overrides), pool)
        summary.append((name, part))
        outcome.merge(part)
    extra = _collect(pool, [(("calculus",), calculus_task, {"tolerance": config.tolerances["exponents"],
        "interpolation": config.tolerances["interpolation"]}), (("health",), health_task,
        {"tolerance": config.tolerances["transforms"]})], Outcome(), "acceptance check")
    summary.append(("calculus+health", extra))
    outcome.merge(extra)
    rows = []
    for name, part in summary:
        cases = sum(len(table.rows) for table in part.tables)
        rows.append({"check": name, "cases": cases, "failures": len(part.failures), "passed": not part.failures})
    outcome.table("verify", VERIFY_COLUMNS).rows.extend(rows)
    return outcome


def _replaced(config: RunConfig, command: str, overrides: dict):
    values = {item.name: getattr(config, item.name) for item in fields(RunConfig)}
    values.update(overrides)
    values["command"] = command
    values["function"] = None
    values["tolerances"] = dict(config.tolerances)
    replaced = RunConfig(**values)
    replaced.validate()
    return replaced


COMMAND_FUNCTIONS = {"trace": command_trace, "morawetz": command_morawetz, "strichartz": command_strichartz,
    "sobolev": command_sobolev, "divergence": command_divergence, "exponents": command_exponents,
    "verify-all": command_verify_all}


# ----------------------------------------------------------------------------

def run(config: RunConfig):
    '''Runs the configured command, writes its reports and returns the exit status.'''
    logger = ml.get("Sweeps", level=config.logg)
    logger.info(f"Running {config.command} with {config.jobs} job(s) into {config.output}.")
    pool = mw.Pool(jobs=config.jobs, level=config.logg)
    outcome = COMMAND_FUNCTIONS[config.command](config, pool)
    files = {}
    for table in outcome.tables:
        path = mr.write_table(config.output, table.name, table.columns, table.rows, config.format)
        files[f"{table.name}.{config.format}"] = len(table.rows)
        logger.info(f"Wrote {len(table.rows)} rows to {path}.")
    failures = sorted(outcome.failures, key=lambda failure: (failure["key"], failure["error"], failure["text"]))
    code = status(failures)
    for failure in failures:
        logger.error(f"{failure['key']}: {failure['error']}: {failure['text']}")
    mr.write_manifest(config.output, config.command, files, failures, code)
    logger.info(f"Finished {config.command} with status {code} and {len(failures)} failure(s).")
    return code


# ----------------------------------------------------------------------------
