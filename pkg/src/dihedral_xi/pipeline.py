"""
Xi evaluation.

Xi_p = (p^2 - 1)/(6p) * L_V(beta, beta) + sum_i sigma_{zeta^i}(beta) + sigma(W),
with sigma(W) = -sigma(M) and M assembled from linking blocks of lifts.
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_serializer

from .coloring import DihedralPermutation, monodromy, monodromy_of_colors
from .cover import build_cover_complex
from .diagram import AnchorPath, Scene, load_scene, parse_scene, same_alpha_numbering
from .errors import NotRationalHomologySphereError, SceneError, SeifertError, XiError
from .linking import BasisSpec, BlockSource, IntersectionDataMatrix, assemble_M, basis_lifts
from .providers import ComputedBlockProvider
from .seifert import SeifertData, self_pairing, symmetrize, verify_characteristic
from .signatures import signature_symmetric, tl_sum

logger = logging.getLogger(__name__)

OBSTRUCTED = "obstructed"
NOT_OBSTRUCTED = "not obstructed"
UNDETERMINED = "undetermined"

GAMMA_R = "gamma_r"
GAMMA_L = "gamma_l"


# --- problem files -----------------------------------------------------------


class SeifertDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    matrix: List[List[int]]
    basis: List[str] = Field(default_factory=list)


class AnchorDocument(BaseModel):
    """An anchor path as alpha arcs (needs a scene) or as the colors it crosses."""

    model_config = ConfigDict(extra="forbid")

    target: str
    arcs: Optional[List[int]] = None
    colors: Optional[List[int]] = None


class ProblemDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "problem"
    p: int = 3
    seifert: SeifertDocument
    characteristic: List[int]
    beta_seifert_matrix: List[List[int]] = Field(default_factory=list)
    characteristic_curve: str = "beta"
    omega: List[str] = Field(default_factory=list)
    c0: Optional[int] = None
    anchor_paths: Dict[str, AnchorDocument] = Field(default_factory=dict)
    scenes: List[str] = Field(default_factory=list)
    pushoffs: Dict[str, str] = Field(default_factory=dict)
    assume_rational_homology_sphere: Optional[bool] = None


@dataclass
class ProblemInput:
    name: str
    p: int
    seifert: SeifertData
    characteristic: Tuple[int, ...]
    beta_seifert: Tuple[Tuple[int, ...], ...]
    characteristic_curve: str
    omega: List[str]
    c0: int
    monodromies: Dict[str, DihedralPermutation]
    scenes: List[Scene] = field(default_factory=list)
    pushoffs: Dict[str, str] = field(default_factory=dict)
    assume_rational_homology_sphere: Optional[bool] = None

    @property
    def symmetrized(self) -> Tuple[Tuple[int, ...], ...]:
        return symmetrize(self.seifert)

    def validate(self) -> None:
        if not verify_characteristic(self.symmetrized, self.characteristic, self.p):
            raise SeifertError(
                f"{list(self.characteristic)} is not a primitive mod {self.p} "
                f"characteristic vector of L_V",
                problem=self.name,
            )
        for curve in self.omega:
            if curve not in self.monodromies:
                raise XiError(f"no anchor path reaches {curve}", problem=self.name)
        for first, second in zip(self.scenes, self.scenes[1:]):
            if not same_alpha_numbering(first, second):
                raise SceneError(
                    f"scenes {first.name} and {second.name} number alpha differently"
                )


def _resolve_anchor(
    name: str, doc: AnchorDocument, scene: Optional[Scene], p: int
) -> DihedralPermutation:
    if doc.colors is not None and doc.arcs is not None:
        raise XiError(f"anchor path {name} gives both arcs and colors")
    if doc.colors is not None:
        return monodromy_of_colors(doc.colors, p)
    if scene is None:
        raise XiError(f"anchor path {name} lists arcs but no scene is available")
    return monodromy(AnchorPath(name, doc.target, tuple(doc.arcs or ())), scene)


def _problem_from_document(
    doc: ProblemDocument, scenes: List[Scene], extra_anchors: Dict[str, AnchorDocument]
) -> ProblemInput:
    try:
        seifert = SeifertData.build(doc.seifert.matrix, doc.seifert.basis)
    except SeifertError as e:
        raise SeifertError(f"{doc.name}: {e.message}") from e
    anchors = dict(extra_anchors)
    anchors.update(doc.anchor_paths)
    scene = scenes[0] if scenes else None

    monodromies: Dict[str, DihedralPermutation] = {}
    for name, anchor in anchors.items():
        mu = _resolve_anchor(name, anchor, scene, doc.p)
        key = name if name in (GAMMA_R, GAMMA_L) else anchor.target
        monodromies[key] = mu

    c0 = doc.c0
    if c0 is None:
        if scene is None:
            raise XiError("c0 must be given when the problem has no scene")
        c0 = scene.color_of_arc(0)

    problem = ProblemInput(
        name=doc.name,
        p=doc.p,
        seifert=seifert,
        characteristic=tuple(doc.characteristic),
        beta_seifert=tuple(tuple(r) for r in doc.beta_seifert_matrix),
        characteristic_curve=doc.characteristic_curve,
        omega=list(doc.omega),
        c0=c0,
        monodromies=monodromies,
        scenes=scenes,
        pushoffs=dict(doc.pushoffs),
        assume_rational_homology_sphere=doc.assume_rational_homology_sphere,
    )
    problem.validate()
    return problem


def load_problem(path: Union[str, Path], mirror: bool = False) -> ProblemInput:
    """Load a problem file, or a scene file carrying a ``problem`` section."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except FileNotFoundError:
        raise XiError(f"input not found: {path}") from None
    except json.JSONDecodeError as e:
        raise XiError(f"{path} is not valid JSON: {e}") from e

    if isinstance(raw, dict) and "components" in raw:
        scene = parse_scene(json.dumps(raw), mirror=mirror)
        if not scene.problem:
            raise XiError(f"scene {scene.name} has no problem section")
        section = dict(scene.problem)
        section.setdefault("name", scene.name)
        section.setdefault("p", scene.p)
        scenes = [scene]
        anchors = {
            name: AnchorDocument(target=a.target, arcs=list(a.arcs))
            for name, a in scene.anchor_paths.items()
        }
    else:
        section, scenes, anchors = raw, [], {}

    try:
        doc = ProblemDocument.model_validate(section)
    except ValidationError as e:
        raise XiError(f"problem schema violation in {path}: {e}") from e
    for rel in doc.scenes:
        scenes.append(load_scene(path.parent / rel, mirror=mirror))
    if not anchors and scenes:
        anchors = {
            name: AnchorDocument(target=a.target, arcs=list(a.arcs))
            for name, a in scenes[0].anchor_paths.items()
        }
    logger.info(f"Loaded problem {doc.name} with {len(scenes)} scene(s)")
    return _problem_from_document(doc, scenes, anchors)


# --- derived quantities ------------------------------------------------------


def sigma_W(matrix: Union[IntersectionDataMatrix, Sequence[Sequence[Any]]]) -> int:
    rows = matrix.matrix if isinstance(matrix, IntersectionDataMatrix) else matrix
    return -signature_symmetric(rows)


def cover_signature(p: int, sigma_X: int, e_B: int, xi: Union[int, Fraction]) -> Fraction:
    """Signature of the dihedral cover of a 4-manifold with a singular branch surface."""
    return p * sigma_X - Fraction(p - 1, 4) * e_B - Fraction(xi)


def ribbon_bound(p: int) -> Fraction:
    return Fraction(p - 1, 2)


def ribbon_verdict(xi: Union[int, Fraction], p: int) -> str:
    """Verdict under the rational homology sphere hypothesis."""
    if abs(Fraction(xi)) > ribbon_bound(p):
        return OBSTRUCTED
    return NOT_OBSTRUCTED


# --- report -----------------------------------------------------------------


class XiReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str
    p: int
    h1: Optional[List[int]]
    rational_homology_sphere: Optional[bool]
    c0: int
    monodromies: Dict[str, str]
    basis: List[str]
    matrix: List[List[Fraction]]
    sigma_M: int
    sigma_W: int
    self_linking: int
    term1: Fraction
    term2: int
    xi: Fraction
    integral: bool
    ribbon_bound: Fraction
    verdict: str
    warnings: List[str] = Field(default_factory=list)

    @field_serializer("matrix")
    def _serialize_matrix(self, value: List[List[Fraction]]) -> List[List[str]]:
        return [[str(x) for x in row] for row in value]

    @field_serializer("term1", "xi", "ribbon_bound")
    def _serialize_rational(self, value: Fraction) -> str:
        return str(value)

    def to_json(self, indent: int = 2) -> str:
        return self.model_dump_json(indent=indent)


def _cover_h1(
    problem: ProblemInput, provider: Optional[BlockSource]
) -> Optional[List[int]]:
    if not problem.scenes:
        return None
    scene = problem.scenes[0]
    if isinstance(provider, ComputedBlockProvider) and provider.scenes[:1] and provider.scenes[0] is scene:
        complex_ = provider.complex_for(0)
    else:
        complex_ = build_cover_complex(scene)
    return complex_.homology().h1_factors


def compute_xi(
    problem: ProblemInput,
    provider: Optional[BlockSource] = None,
    max_workers: int = 1,
    sign_digits: int = 30,
) -> XiReport:
    p = problem.p
    warnings: List[str] = []
    if provider is None:
        provider = ComputedBlockProvider(problem.scenes, problem.pushoffs, max_workers)

    h1 = _cover_h1(problem, provider)
    if h1 is not None:
        qhs: Optional[bool] = 0 not in h1
        if not qhs:
            raise NotRationalHomologySphereError(
                f"H1 of the dihedral cover is {h1}: not a rational homology sphere",
                problem=problem.name,
            )
    else:
        qhs = problem.assume_rational_homology_sphere
        if qhs is None:
            warnings.append(
                "H1 of the cover was not computed; the ribbon verdict is undetermined"
            )

    basis: BasisSpec = basis_lifts(
        {curve: problem.monodromies.get(curve) for curve in problem.omega},  # type: ignore[misc]
        problem.monodromies.get(GAMMA_R),
        problem.monodromies.get(GAMMA_L),
        problem.c0,
        problem.seifert.genus,
        beta=problem.characteristic_curve,
    )
    if isinstance(provider, ComputedBlockProvider):
        curves = [e.curve for e in basis.elements]
        provider.prefetch((x, y) for x in curves for y in curves)
    matrix = assemble_M(provider, basis)

    rows = [list(r) for r in matrix.matrix]
    if not matrix.is_symmetric:
        message = "M is not symmetric; its symmetric part is used for the signature"
        logger.warning(message)
        warnings.append(message)
        n = len(rows)
        rows = [[(rows[r][s] + rows[s][r]) / 2 for s in range(n)] for r in range(n)]
    if h1 is not None and not h1 and not matrix.is_integral:
        message = "M has non-integral entries although H1 of the cover vanishes"
        logger.warning(message)
        warnings.append(message)

    sigma_M = signature_symmetric(rows)
    sigma_w = -sigma_M
    self_linking = self_pairing(problem.symmetrized, problem.characteristic)
    term1 = Fraction(p * p - 1, 6 * p) * self_linking
    term2 = tl_sum(problem.beta_seifert, p, sign_digits)
    xi = term1 + term2 + sigma_w
    integral = xi.denominator == 1
    if not integral:
        message = f"Xi = {xi} is not an integer; check the input data"
        logger.warning(message)
        warnings.append(message)

    verdict = ribbon_verdict(xi, p) if qhs else UNDETERMINED
    logger.info(f"{problem.name}: sigma(M)={sigma_M}, Xi={xi}, verdict={verdict}")
    return XiReport(
        name=problem.name,
        p=p,
        h1=h1,
        rational_homology_sphere=qhs,
        c0=problem.c0,
        monodromies={k: str(v) for k, v in sorted(problem.monodromies.items())},
        basis=basis.names,
        matrix=[list(r) for r in matrix.matrix],
        sigma_M=sigma_M,
        sigma_W=sigma_w,
        self_linking=self_linking,
        term1=term1,
        term2=term2,
        xi=xi,
        integral=integral,
        ribbon_bound=ribbon_bound(p),
        verdict=verdict,
        warnings=warnings,
    )
