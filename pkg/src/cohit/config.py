"""Global size caps.

Everything in this package is finite linear algebra, but the matrices grow
fast with the degree; the caps below keep accidental `--d 10000` requests from
eating the machine.  They cover every supported computation (max degree 63,
k = 4, lambda bidegrees up to (7, 70)) with headroom, and can be raised by
callers that know what they are doing.
"""

DEGREE_CAP = 70
K_CAP = 5
LAMBDA_S_CAP = 7
LAMBDA_W_CAP = 70


class CapExceeded(Exception):
    """Requested computation exceeds the configured size caps."""


def set_degree_cap(n: int) -> None:
    global DEGREE_CAP
    DEGREE_CAP = int(n)


def check_degree(d: int) -> None:
    if d > DEGREE_CAP:
        raise CapExceeded(f"degree {d} exceeds cap {DEGREE_CAP}")


def check_k(k: int) -> None:
    if k > K_CAP:
        raise CapExceeded(f"{k} variables exceed cap {K_CAP}")


def check_lambda(s: int, w: int) -> None:
    if s > LAMBDA_S_CAP or w > LAMBDA_W_CAP:
        raise CapExceeded(f"lambda bidegree ({s},{w}) exceeds caps "
                          f"({LAMBDA_S_CAP},{LAMBDA_W_CAP})")
