"""Plain grids and composed grids as multigraphs (vertex ``(h, w)`` of Γ[H, W] is ``(h-1)W + w``)."""

from __future__ import annotations

from ..multigraph import Multigraph


def grid_edges(H: int, W: int, offset: int = 0) -> list[tuple[int, int]]:
    vid = lambda h, w: offset + (h - 1) * W + w  # noqa: E731
    out = [(vid(h, w), vid(h, w + 1)) for h in range(1, H + 1) for w in range(1, W)]
    out += [(vid(h, w), vid(h + 1, w)) for h in range(1, H) for w in range(1, W + 1)]
    return out


def build_grid(H: int, W: int) -> Multigraph:
    if H < 1 or W < 1:
        raise ValueError("grid dimensions must be positive")
    return Multigraph.from_edge_list(H * W, grid_edges(H, W))


def composed_layout(H_l: int, W_l: int, H_m: int, W_m: int) -> dict[str, int]:
    """Vertex offsets of L, M and R inside the composed grid."""
    return {"L": 0, "M": H_l * W_l, "R": H_l * W_l + H_m * W_m}


def connector_edges(H_l: int, W_l: int, H_m: int, W_m: int) -> list[tuple[int, int]]:
    off = composed_layout(H_l, W_l, H_m, W_m)
    l_ = lambda h, w: off["L"] + (h - 1) * W_l + w  # noqa: E731
    m_ = lambda h, w: off["M"] + (h - 1) * W_m + w  # noqa: E731
    r_ = lambda h, w: off["R"] + (h - 1) * W_l + w  # noqa: E731
    out = []
    for h in range(1, H_m + 1):
        out.append((l_(h, W_l), m_(h, 1)))
        out.append((m_(h, W_m), r_(H_l - H_m + h, 1)))
    return out


def build_composed_grid(H_l: int, W_l: int, H_m: int, W_m: int) -> Multigraph:
    """Σ[H_l, W_l, H_m, W_m]: grids L and R of size Γ[H_l, W_l] joined through M = Γ[H_m, W_m]."""
    if not H_l > H_m >= 1:
        raise ValueError(f"composed grid needs H_l > H_m >= 1, got H_l={H_l}, H_m={H_m}")
    if W_l < 1 or W_m < 1:
        raise ValueError("grid widths must be positive")
    off = composed_layout(H_l, W_l, H_m, W_m)
    pairs = grid_edges(H_l, W_l, off["L"]) + grid_edges(H_m, W_m, off["M"]) + grid_edges(H_l, W_l, off["R"])
    pairs += connector_edges(H_l, W_l, H_m, W_m)
    return Multigraph.from_edge_list(2 * H_l * W_l + H_m * W_m, pairs)
