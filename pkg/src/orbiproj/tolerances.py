from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    """Numerical slack used across the package.

    Any function that takes ``tol`` accepts an instance of this record;
    use :meth:`with_` to override individual fields for a single call.
    """

    incidence: float = 1e-9
    projective_equal: float = 1e-9
    matrix_equal: float = 1e-9
    repeated_eigenvalue: float = 1e-7
    purely_hyperbolic: float = 1e-9
    relation: float = 1e-8
    conic_singular: float = 1e-10
    elliptic_order_max: int = 1000
    dedup: float = 1e-8
    convexity: float = 1e-7
    degenerate_area: float = 1e-300
    invariant_match: float = 1e-9
    tile_cap: int = 200_000

    def with_(self, **changes):
        return replace(self, **changes)


DEFAULT = Tolerances()
