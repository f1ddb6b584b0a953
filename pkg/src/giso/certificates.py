"""Local certificates of fullness and non-fullness, and their comparison.

Throughout, ``phi`` is a tracked epimorphism G -> Alt(Gamma) and a test set T
is a set of k points of Gamma. G_T is the preimage of the setwise stabilizer
Alt(Gamma)_T, and psi denotes the map a -> phi(a) restricted to T.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .coset import IsoCoset
from .perm import (
    Giant, PermGroup, Permutation, TrackedHom, format_permutation, giant_test, restrict_hom,
    subgroup_with_cosets,
)
from .strings import act, iso_cosets_union, truncate, young_subgroup

Solve = Callable[..., IsoCoset]

FULL = "FULL"
NON_FULL = "NON_FULL"


class CertificateError(AssertionError):
    """A structural guarantee failed at runtime (outside the relaxed mode)."""


@dataclass
class Certificate:
    kind: str
    T: tuple[int, ...]
    window: tuple[int, ...]
    group: PermGroup
    iterations: int = 0
    fallback: bool = False

    @property
    def is_full(self) -> bool:
        return self.kind == FULL


@dataclass
class CertCompareResult:
    window_x: tuple[int, ...]
    window_y: tuple[int, ...]
    iso_coset: IsoCoset
    cert_x: Certificate | None = None
    cert_y: Certificate | None = None


def setwise_alt(points: Sequence[int], m: int) -> PermGroup:
    """Alt(Gamma)_T: even permutations of Gamma preserving the point set."""
    inside = sorted(points)
    rest = [c for c in range(m) if c not in set(inside)]
    return young_subgroup([p for p in (inside, rest) if p], m, even=True)


def restrict_to_points(tau: Sequence[int], points: Sequence[int]) -> Permutation:
    """tau on an invariant point list, relabelled by position in the list."""
    index = {p: i for i, p in enumerate(points)}
    return Permutation(index[tau[p]] for p in points)


def hom_to_test_set(phi: TrackedHom, group: PermGroup, T: Sequence[int]) -> TrackedHom:
    """psi: group -> Sym(T), a -> phi(a) restricted to T."""
    return TrackedHom(group, len(T), [restrict_to_points(phi.evaluate(g), T) for g in group.generators])


def aligning_even_permutation(source: Sequence[int], target: Sequence[int], m: int) -> Permutation | None:
    """An even permutation of range(m) mapping the tuple ``source`` onto ``target`` entrywise."""
    img = [-1] * m
    for a, b in zip(source, target):
        img[a] = b
    free_src = [c for c in range(m) if img[c] < 0]
    free_dst = sorted(set(range(m)) - set(target))
    for a, b in zip(free_src, free_dst):
        img[a] = b
    tau = Permutation(img)
    if tau.is_even():
        return tau
    if len(free_src) >= 2:
        return Permutation.from_cycles([free_src[:2]], m) * tau
    return None


def aligning_even_set_map(source: Sequence[int], target: Sequence[int], m: int) -> Permutation | None:
    """An even permutation mapping the set ``source`` onto the set ``target``."""
    src, dst = sorted(source), sorted(target)
    tau = aligning_even_permutation(src, dst, m)
    if tau is None and len(src) >= 2:
        tau = aligning_even_permutation(src, [dst[1], dst[0]] + dst[2:], m)
    return tau


def affected_elements(group: PermGroup, phi: TrackedHom) -> frozenset[int]:
    """Points w such that phi(G_w) does not contain the alternating group of the codomain."""
    phi = restrict_hom(phi, group)
    affected = set()
    for orbit in group.orbit_list():
        stab = phi.shadow.stabilizer(orbit[0])
        img = PermGroup(phi.m, [phi.gamma_part(d) for d in stab.generators])
        if giant_test(img) is Giant.NEITHER:
            affected.update(orbit)
    return frozenset(affected)


@dataclass
class _Step:
    window: frozenset
    kernel: PermGroup
    reps: list
    before: PermGroup


@dataclass
class CertificateRun:
    """The localcert loop for one string and one test set, with its history kept."""

    T: tuple[int, ...]
    group: PermGroup
    phi: TrackedHom
    x: tuple
    solve: Solve
    relaxed: bool = False
    glaucous: int | None = None
    steps: list = field(default_factory=list)
    certificate: Certificate | None = None

    def __post_init__(self):
        self.T = tuple(sorted(self.T))
        if self.glaucous is None:
            self.glaucous = max(self.x, default=-1) + 1
        self.start = self.phi.preimage(setwise_alt(self.T, self.phi.m))
        self.A = self.start
        self.W: frozenset = frozenset()

    def run(self) -> Certificate:
        n = self.group.degree
        for _ in range(n + 2):
            if self.certificate is not None:
                return self.certificate
            self.step()
        raise CertificateError("window failed to grow")

    def step(self) -> _Step | None:
        k = len(self.T)
        psi = hom_to_test_set(self.phi, self.A, self.T)
        image = psi.image()
        if giant_test(image) is Giant.NEITHER:
            self.certificate = Certificate(NON_FULL, self.T, tuple(sorted(self.W)), image, len(self.steps))
            return None
        aff = affected_elements(self.A, psi)
        if aff <= self.W:
            self._finish_full(psi)
            return None
        grown = self.W | aff
        kernel = psi.kernel()
        xw = truncate(self.x, grown, self.glaucous)
        if kernel.is_trivial():
            reps = None
            new = self.solve(self.A, xw, xw).group
        else:
            reps = [psi.lift(q) for q in image.elements()]
            if not self.relaxed and k > 5:
                limit = len(grown) // k
                for orbit in kernel.orbit_list():
                    if orbit[0] in grown and len(orbit) > limit:
                        raise CertificateError(f"kernel orbit of length {len(orbit)} exceeds |W+|/k = {limit}")
            parts = [self.solve(kernel, xw, act(xw, ~s)).shift(s) for s in reps]
            new = iso_cosets_union(parts).group
        record = _Step(grown, kernel, reps, self.A)
        self.steps.append(record)
        self.A = new
        self.W = grown
        return record

    def _finish_full(self, psi: TrackedHom):
        n = self.group.degree
        k_group = self.A.pointwise_stabilizer([w for w in range(n) if w not in self.W])
        psi_k = restrict_hom(psi, k_group)
        kind = giant_test(psi_k.image())
        if kind is Giant.NEITHER:
            if not self.relaxed:
                raise CertificateError("unaffected stabilizer does not map onto Alt(T)")
            self._fallback()
            return
        if kind is Giant.SYMMETRIC and len(self.T) >= 2:
            k_group = psi_k.preimage(PermGroup.alternating(len(self.T)))
        self.certificate = Certificate(FULL, self.T, tuple(sorted(self.W)), k_group, len(self.steps))

    def _fallback(self):
        """Relaxed mode: decide fullness from the exact automorphism group of x in G_T."""
        n = self.group.degree
        aut = self.solve(self.start, self.x, self.x).group
        psi = hom_to_test_set(self.phi, aut, self.T)
        image = psi.image()
        kind = giant_test(image)
        window = tuple(range(n))
        if kind is Giant.NEITHER:
            self.certificate = Certificate(NON_FULL, self.T, window, image, len(self.steps), fallback=True)
            return
        k_group = aut
        if kind is Giant.SYMMETRIC and len(self.T) >= 2:
            k_group = psi.preimage(PermGroup.alternating(len(self.T)))
        self.certificate = Certificate(FULL, self.T, window, k_group, len(self.steps), fallback=True)


def local_certificate(T: Sequence[int], group: PermGroup, phi: TrackedHom, x: Sequence[int], solve: Solve,
                      relaxed: bool = False) -> Certificate:
    """Certificate of fullness K(T), or of non-fullness (W, M(T)), for x and T."""
    return CertificateRun(tuple(T), group, phi, tuple(x), solve, relaxed).run()


def compare_certificates(T: Sequence[int], T2: Sequence[int], group: PermGroup, phi: TrackedHom,
                         x: Sequence[int], y: Sequence[int], solve: Solve, relaxed: bool = False,
                         run_x: CertificateRun | None = None, run_y: CertificateRun | None = None) -> CertCompareResult:
    """Iso_{G_{T,T'}}(x^{W(T)}, y^{W(T')}), following both certificate loops in lockstep."""
    x, y = tuple(x), tuple(y)
    if len(set(T)) != len(set(T2)):
        raise ValueError("test sets differ in size")
    glaucous = max(max(x, default=-1), max(y, default=-1)) + 1
    run_x = run_x or CertificateRun(tuple(T), group, phi, x, solve, relaxed, glaucous)
    run_y = run_y or CertificateRun(tuple(T2), group, phi, y, solve, relaxed, glaucous)
    cert_x, cert_y = run_x.run(), run_y.run()

    def rejected():
        return CertCompareResult(cert_x.window, cert_y.window, IsoCoset.empty(), cert_x, cert_y)

    if (cert_x.kind, cert_x.fallback, len(run_x.steps)) != (cert_y.kind, cert_y.fallback, len(run_y.steps)):
        return rejected()
    tau = aligning_even_set_map(run_x.T, run_y.T, phi.m)
    if tau is None:
        return rejected()
    q = IsoCoset(run_x.start, phi.lift(tau))
    for sx, sy in zip(run_x.steps, run_y.steps):
        if len(sx.window) != len(sy.window):
            return rejected()
        xw = truncate(x, sx.window, glaucous)
        yw = act(truncate(y, sy.window, glaucous), ~q.rep)
        if sx.reps is None:
            q = solve(q.group, xw, yw).shift(q.rep)
        else:
            parts = [solve(sx.kernel, xw, act(yw, ~s)).shift(s) for s in sx.reps]
            q = iso_cosets_union(parts).shift(q.rep)
        if q.is_empty():
            return rejected()
    if cert_x.fallback:
        q = solve(q.group, x, act(y, ~q.rep)).shift(q.rep)
    return CertCompareResult(cert_x.window, cert_y.window, q, cert_x, cert_y)


def compare_certificates_tuples(t: Sequence[int], t2: Sequence[int], group: PermGroup, phi: TrackedHom,
                                x: Sequence[int], y: Sequence[int], solve: Solve, relaxed: bool = False,
                                set_result: CertCompareResult | None = None) -> CertCompareResult:
    """The set comparison refined to elements mapping t_l to t'_l for every l, in order."""
    if len(set(t)) != len(t) or len(set(t2)) != len(t2):
        raise ValueError("tuples must be duplicate-free")
    res = set_result or compare_certificates(t, t2, group, phi, x, y, solve, relaxed)
    q = res.iso_coset
    if q.is_empty():
        return res
    pi_img = phi.evaluate(q.rep)
    pi_inv = ~pi_img
    targets = [pi_inv[c] for c in t2]
    sub = q.group
    rho = sub.identity()
    for point, target in zip(t, targets):
        rho_img = phi.evaluate(rho)
        want = (~rho_img)[target]
        stab, reps = subgroup_with_cosets(sub, lambda g, p=point: phi.evaluate(g)[p] == p, len(t) + phi.m)
        hit = next((r for r in reps if phi.evaluate(r)[point] == want), None)
        if hit is None:
            return CertCompareResult(res.window_x, res.window_y, IsoCoset.empty(), res.cert_x, res.cert_y)
        sub = stab
        rho = hit * rho
    return CertCompareResult(res.window_x, res.window_y, IsoCoset(sub, rho * q.rep), res.cert_x, res.cert_y)


def format_certificate(cert: Certificate) -> str:
    lines = [cert.kind, " ".join(map(str, cert.T)), " ".join(map(str, cert.window))]
    lines += [format_permutation(g) for g in cert.group.generators]
    return "\n".join(lines)
