"""Scenario documents: one JSON file describing a model, generators and samplers.

A scenario looks like::

    {"schema": "usampling.scenario/1",
     "model": {"kind": "periodized_shift", "s": 8, "q": 4},
     "generators": [{"preset": "hat"}],
     "samplers": {"mode": "average", "vectors": [{"preset": "box", "start": 0, "width": 4}]},
     "subgroup": {"steps": [1]},
     "tolerance": 1e-12}

``generators`` and sampler ``vectors`` are explicit coefficient lists (reals or
``[re, im]`` pairs, flattened row-major on 2-D grids) or presets. A
crystallographic model takes a single mother generator and expands it over the
point group. A scenario may instead carry only ``"system"`` (a serialized
:class:`~usampling.convops.ConvMatrix`); it is then read as a system on
``l^2_N(G)`` with delta generators and samples are taken as ``A * x``.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Optional

import jsonschema
import numpy as np

from . import matrixcore
from .abelian_group import CosetDecomposition, coset_decompose, cyclic_rotations, dihedral_group, make_group
from .convops import ConvMatrix, convolve
from .errors import ContractError, InvalidSpecError
from .frames import FrameReport, bessel_bound, is_dual_pair
from .hmodels import (
    GeneratorSet,
    HModel,
    SamplerSet,
    box,
    box2d,
    bump2d,
    build_sampler,
    crystal_generators,
    discrete_gaussian,
    hat,
    make_crystallographic_model,
    make_periodized_shift_model,
    make_regular_model,
    restrict,
    restrict_samplers,
    sample,
    synthesize,
)
from .sampler import ILL_CONDITIONED_FACTOR, ReconstructionKit, design, regroup, ungroup
from .serialize import (
    KIT_SCHEMA,
    SAMPLES_SCHEMA,
    SCENARIO_SCHEMA,
    VECTOR_SCHEMA,
    bundle_from_json,
    bundle_to_json,
    complex_from_json,
    complex_to_json,
)

_number = {"type": "number"}
_complex = {"oneOf": [_number, {"type": "array", "items": _number, "minItems": 2, "maxItems": 2}]}
_vector = {
    "oneOf": [
        {"type": "array", "items": _complex, "minItems": 1},
        {"type": "object", "required": ["preset"], "properties": {"preset": {"type": "string"}}},
    ]
}
_point = {"oneOf": [{"type": "integer"}, {"type": "array", "items": {"type": "integer"}}]}

SCENARIO_JSONSCHEMA = {
    "type": "object",
    "required": ["schema"],
    "properties": {
        "schema": {"const": SCENARIO_SCHEMA},
        "model": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["regular", "periodized_shift", "crystallographic"]},
                "s": {"type": "integer", "minimum": 1},
                "q": {"type": "integer", "minimum": 1},
                "orders": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
                "channels": {"type": "integer", "minimum": 1},
                "gamma": {
                    "oneOf": [
                        {"enum": ["C1", "C2", "C4", "D1", "D2", "D4"]},
                        {"type": "array", "items": {"type": "array"}, "minItems": 1},
                    ]
                },
            },
            "additionalProperties": False,
        },
        "generators": {"type": "array", "items": _vector, "minItems": 1},
        "samplers": {
            "type": "object",
            "required": ["mode"],
            "properties": {
                "mode": {"enum": ["average", "pointwise"]},
                "vectors": {"type": "array", "items": _vector, "minItems": 1},
                "points": {"type": "array", "items": _point, "minItems": 1},
            },
            "additionalProperties": False,
        },
        "system": {"type": "object", "required": ["group", "M", "N", "entries"]},
        "subgroup": {
            "type": "object",
            "required": ["steps"],
            "properties": {"steps": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}},
        },
        "tolerance": {"type": "number", "exclusiveMinimum": 0},
        "name": {"type": "string"},
        "description": {"type": "string"},
    },
    "additionalProperties": False,
    "oneOf": [{"required": ["model", "generators", "samplers"]}, {"required": ["system"]}],
}


def validate_scenario(doc) -> None:
    """Raise :class:`InvalidSpecError` listing every schema violation."""
    v = jsonschema.Draft202012Validator(SCENARIO_JSONSCHEMA)
    errors = sorted(v.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        lines = [f"  at {'/'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}" for e in errors]
        raise InvalidSpecError("scenario failed validation:\n" + "\n".join(lines))


def _point_group(spec):
    if isinstance(spec, str):
        kind, n = spec[0], int(spec[1:])
        try:
            return cyclic_rotations(n) if kind == "C" else dihedral_group(n)
        except ValueError as exc:
            raise InvalidSpecError(str(exc)) from exc
    return [np.asarray(m, dtype=int) for m in spec]


def build_model(cfg) -> HModel:
    kind = cfg["kind"]
    need = {"regular": ("orders",), "periodized_shift": ("s", "q"), "crystallographic": ("s", "q", "gamma")}[kind]
    missing = [k for k in need if k not in cfg]
    if missing:
        raise InvalidSpecError(f"model kind {kind!r} needs {', '.join(missing)}")
    if kind == "regular":
        return make_regular_model(make_group(cfg["orders"]), channels=cfg.get("channels", 1))
    if kind == "periodized_shift":
        return make_periodized_shift_model(cfg["s"], cfg["q"])
    return make_crystallographic_model(cfg["s"], cfg["q"], _point_group(cfg["gamma"]))


def _preset(model: HModel, spec) -> np.ndarray:
    p = dict(spec)
    name = p.pop("preset")
    K, q = model.dim, model.cell
    two_d = len(model.grid_shape) == 2
    n = model.grid_shape[0]
    try:
        if name == "delta":
            at = p.pop("at", 0)
            v = np.zeros(K)
            v[model.grid_index(at)] = 1.0
        elif name == "hat" and not two_d:
            v = hat(K, q, p.pop("center", 0.0))
        elif name == "box" and not two_d:
            v = box(K, p.pop("start", 0), p.pop("width", q))
        elif name == "box" and two_d:
            v = box2d(n, tuple(p.pop("start", (0, 0))), tuple(p.pop("width", (q, q))))
        elif name == "gaussian" and not two_d:
            v = discrete_gaussian(K, p.pop("sigma", q / 2), p.pop("center", 0.0))
        elif name in ("gaussian", "bump") and two_d:
            v = bump2d(n, tuple(p.pop("center", (0.0, 0.0))), p.pop("sigma", 1.0))
        else:
            raise InvalidSpecError(f"preset {name!r} is not available on a {len(model.grid_shape)}-D grid")
    except TypeError as exc:
        raise InvalidSpecError(f"bad parameters for preset {name!r}: {exc}") from exc
    if p:
        raise InvalidSpecError(f"unknown parameters for preset {name!r}: {sorted(p)}")
    return v


def _vectors(model: HModel, items) -> np.ndarray:
    out = []
    for j, item in enumerate(items):
        v = _preset(model, item) if isinstance(item, dict) else complex_from_json(item)
        if v.shape != (model.dim,):
            raise InvalidSpecError(f"vector {j} has length {v.size}, model dimension is {model.dim}")
        out.append(v)
    return np.stack(out).astype(complex)


@dataclass(frozen=True, eq=False)
class Scenario:
    """A validated scenario with its library objects built.

    ``system``, ``generators`` and ``samplers`` are the ones reconstruction
    runs on: over the subgroup when one is given.
    """

    doc: dict
    model: HModel
    generators: GeneratorSet
    samplers: Optional[SamplerSet]
    system: ConvMatrix
    tolerance: float
    decomposition: Optional[CosetDecomposition] = None
    base_generators: Optional[GeneratorSet] = field(default=None)

    @property
    def group(self):
        return self.system.group

    def sample(self, f) -> np.ndarray:
        """Samples of ``f``: direct sampler evaluation, or ``A * x`` for a system-only scenario."""
        f = np.asarray(f, dtype=complex)
        if f.shape != (self.model.dim,):
            raise ContractError(f"input vector has length {f.size}, model dimension is {self.model.dim}")
        if self.samplers is not None:
            return sample(self.samplers, f)
        return convolve(self.system, f.reshape(self.system.cols, -1))

    def coefficients_to_vector(self, x) -> np.ndarray:
        """``f = T_{U,Phi} x`` for coefficients on the original group."""
        return synthesize(self.base_generators, x)

    def full_coefficients(self, x) -> np.ndarray:
        """Coefficients on the original group from the ones reconstruction returns."""
        return ungroup(x, self.decomposition) if self.decomposition is not None else x

    def design(self, C=None) -> ReconstructionKit:
        return design(self.system, self.generators, C=C, samplers=self.samplers, tol=self.tolerance)


def load_scenario(doc, tolerance: Optional[float] = None) -> Scenario:
    validate_scenario(doc)
    tol = float(tolerance if tolerance is not None else doc.get("tolerance", matrixcore.RANK_TOL))
    if "system" in doc:
        A = ConvMatrix.from_json(doc["system"])
        model = make_regular_model(A.group, channels=A.cols)
        n = A.group.cardinality
        gens = GeneratorSet(model, np.eye(model.dim)[[c * n for c in range(A.cols)]])
        samplers = None
    else:
        model = build_model(doc["model"])
        vecs = _vectors(model, doc["generators"])
        if model.kind == "crystallographic":
            if len(vecs) != 1:
                raise InvalidSpecError("a crystallographic scenario takes exactly one mother generator")
            gens = crystal_generators(model, vecs[0])
        else:
            gens = GeneratorSet(model, vecs)
        sc = doc["samplers"]
        if sc["mode"] == "average":
            if "vectors" not in sc:
                raise InvalidSpecError("average samplers need 'vectors'")
            samplers = SamplerSet(model, "average", vectors=_vectors(model, sc["vectors"]))
        else:
            if "points" not in sc:
                raise InvalidSpecError("pointwise samplers need 'points'")
            samplers = SamplerSet(model, "pointwise", points=tuple(sc["points"]))
        A = build_sampler(gens, samplers)
    base = gens
    D = None
    if "subgroup" in doc:
        D = coset_decompose(model.group, doc["subgroup"]["steps"])
        gens = restrict(gens, D)
        if samplers is not None:
            samplers = restrict_samplers(samplers, gens.model)
            A = build_sampler(gens, samplers)
        else:
            raise InvalidSpecError("subgroup sampling needs model samplers, not a bare system")
        model = base.model
    return Scenario(doc, model, gens, samplers, A, tol, D, base)


# ---------------------------------------------------------------- kits and sample files


def kit_to_json(kit: ReconstructionKit, scenario: Scenario) -> dict:
    return {
        "schema": KIT_SCHEMA,
        "scenario": scenario.doc,
        "tolerance": scenario.tolerance,
        "A": kit.A.to_json(),
        "B": kit.B.to_json(),
        "S": bundle_to_json(kit.S),
        "report": kit.report.to_json(),
        "duality_deviation": kit.duality_deviation,
        "ill_conditioned": kit.ill_conditioned,
        "noise_amplification": kit.noise_amplification,
    }


def kit_from_json(obj):
    """Rebuild ``(kit, scenario)``; the stored ``B`` is re-checked against the stored ``A``."""
    if not isinstance(obj, dict) or obj.get("schema") != KIT_SCHEMA:
        raise InvalidSpecError(f"not a {KIT_SCHEMA} document")
    try:
        scenario = load_scenario(obj["scenario"], tolerance=obj.get("tolerance"))
        A, B = ConvMatrix.from_json(obj["A"]), ConvMatrix.from_json(obj["B"])
        S = bundle_from_json(obj["S"])
        report = FrameReport.from_json(obj["report"])
    except KeyError as exc:
        raise InvalidSpecError(f"kit is missing field {exc}") from exc
    if A.group != scenario.group or A.shape != scenario.system.shape:
        raise InvalidSpecError("kit system does not match its scenario")
    ok, dev = is_dual_pair(A, B)
    if not ok:
        raise InvalidSpecError(f"kit is corrupted: stored B is not a left inverse of A (deviation {dev:.3e})")
    kit = ReconstructionKit(
        A=A,
        B=B,
        generators=scenario.generators,
        S=S,
        report=report,
        duality_deviation=dev,
        ill_conditioned=bool(report.delta <= ILL_CONDITIONED_FACTOR * report.threshold),
        noise_amplification=bessel_bound(B),
        samplers=scenario.samplers,
    )
    return kit, scenario


def samples_to_json(samples, group) -> dict:
    return {"schema": SAMPLES_SCHEMA, "group": group.to_json(), "samples": bundle_to_json(samples)}


def samples_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or obj.get("schema") != SAMPLES_SCHEMA:
        raise InvalidSpecError(f"not a {SAMPLES_SCHEMA} document")
    return bundle_from_json(obj["samples"])


def vector_to_json(f, **extra) -> dict:
    out = {"schema": VECTOR_SCHEMA, "f": complex_to_json(f)}
    out.update(extra)
    return out


def vector_from_json(obj, scenario: Optional[Scenario] = None) -> np.ndarray:
    """Read ``f`` directly or from ``"coefficients"`` (synthesized through the scenario)."""
    if not isinstance(obj, dict) or obj.get("schema") != VECTOR_SCHEMA:
        raise InvalidSpecError(f"not a {VECTOR_SCHEMA} document")
    if "f" in obj:
        return complex_from_json(obj["f"])
    if "coefficients" in obj and scenario is not None:
        return scenario.coefficients_to_vector(bundle_from_json(obj["coefficients"]))
    raise InvalidSpecError("vector document needs 'f' (or 'coefficients' with a scenario)")


# ---------------------------------------------------------------- bundled scenarios

_CRYSTAL_AVERAGERS = [(0.5, 0.3), (1.7, 0.2), (0.4, 2.1), (2.6, 2.9), (3.1, 1.3)]


def _subgroup_averagers():
    # fixed pseudo-random averagers; generic enough that delta_A stays well away from zero
    r = np.random.default_rng(12)
    return [[round(float(v), 6) for v in r.uniform(-1, 1, 24)] for _ in range(4)]


def _catalog():
    head = {"schema": SCENARIO_SCHEMA}
    return {
        "avg-shift": dict(
            head,
            name="avg-shift",
            description="hat generator on 8 cells of 4 samples, two box averagers half a cell apart",
            model={"kind": "periodized_shift", "s": 8, "q": 4},
            generators=[{"preset": "hat"}],
            samplers={"mode": "average", "vectors": [{"preset": "box", "start": 0, "width": 4}, {"preset": "box", "start": 2, "width": 4}]},
        ),
        "pointwise-spline": dict(
            head,
            name="pointwise-spline",
            description="hat generator read at offsets 0 and 2 of every cell",
            model={"kind": "periodized_shift", "s": 8, "q": 4},
            generators=[{"preset": "hat"}],
            samplers={"mode": "pointwise", "points": [0, 2]},
        ),
        "crystal-c4": dict(
            head,
            name="crystal-c4",
            description="quarter-turn symmetric space on a 16 x 16 torus, one bump rotated four ways, five averagers",
            model={"kind": "crystallographic", "s": 4, "q": 4, "gamma": "C4"},
            generators=[{"preset": "bump", "center": [1.5, 0.7], "sigma": 1.0}],
            samplers={"mode": "average", "vectors": [{"preset": "bump", "center": list(c), "sigma": 0.8} for c in _CRYSTAL_AVERAGERS]},
        ),
        "subgroup-decimation": dict(
            head,
            name="subgroup-decimation",
            description="12 cells, samples kept on every third cell only, four averagers",
            model={"kind": "periodized_shift", "s": 12, "q": 2},
            generators=[{"preset": "hat"}],
            samplers={"mode": "average", "vectors": _subgroup_averagers()},
            subgroup={"steps": [3]},
        ),
        "identity": dict(
            head,
            name="identity",
            description="identity system on Z_4",
            system=ConvMatrix.identity(make_group([4]), 1).to_json(),
        ),
        "degenerate": dict(
            head,
            name="degenerate",
            description="a = delta_0 + delta_1 on Z_2, which kills the character 1",
            system=ConvMatrix(make_group([2]), [[[1.0, 1.0]]]).to_json(),
        ),
    }


DEMOS = ("avg-shift", "pointwise-spline", "crystal-c4", "subgroup-decimation")


def bundled_names():
    return tuple(_catalog())


def bundled_scenario(name: str) -> dict:
    cat = _catalog()
    if name not in cat:
        raise KeyError(name)
    return copy.deepcopy(cat[name])


def random_test_vector(scenario: Scenario, seed: int) -> np.ndarray:
    """A random element of ``V_Phi`` (fixed by ``seed``)."""
    r = np.random.default_rng(seed)
    g = scenario.base_generators
    shape = (g.N, g.group.cardinality)
    return scenario.coefficients_to_vector(r.standard_normal(shape) + 1j * r.standard_normal(shape))
