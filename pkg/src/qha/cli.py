"""Command-line front end.

Exit codes: 0 success, 2 usage or parse error, 3 desk-scale guardrail,
4 --check residual above --check-tol.  Every command is deterministic:
identical inputs and flags produce byte-identical outputs regardless of
thread count (QHA_THREADS only caps the numba worker pool).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import _kernels
from .convolve import (
    cohen_distribution,
    convolve_function_operator,
    convolve_operators,
    convolve_ps_direct,
    delta_spike,
)
from .decay import MAX_STFT4_N, schwartz_score
from .formats import (
    FormatError,
    emit_grid,
    emit_operator,
    emit_pgm,
    emit_signal,
    parse_grid,
    parse_operator,
    parse_signal,
    read_text,
    write_bytes,
    write_text,
)
from .gabor import GuardrailError, gabor_entry, gabor_matrix, gabor_diagonal_function
from .grid import GridError, GridSpec, PhaseSpaceFunction
from .operators import FiniteRankOperator, random_state
from .quantize import (
    operator_from_spreading,
    operator_from_symbol,
    wigner_transform,
)
from .signals import LatticePoint, Signal, cross_wigner, gaussian

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_GUARDRAIL = 3
EXIT_CHECK = 4

DEFAULTS = {"n": 64, "l": 8.0, "tau": 0.5, "check-tol": 1e-8}

#: --check oracles are O(N^4); refuse above this size
MAX_CHECK_N = 64


class CheckFailure(RuntimeError):
    pass


class UsageError(RuntimeError):
    pass


def _load_config(path: str | None) -> dict:
    cfg = dict(DEFAULTS)
    if not path:
        return cfg
    try:
        text = read_text(path)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        if key not in cfg:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            cfg[key] = int(val) if key == "n" else float(val)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {val!r}") from exc
    return cfg


def _tau(args, cfg) -> float:
    tau = cfg["tau"] if args.tau is None else args.tau
    if not (0.0 <= tau <= 1.0):
        raise UsageError(f"tau must lie in [0, 1], got {tau}")
    return float(tau)


def _read_signal(path: str) -> Signal:
    return parse_signal(read_text(path))


def _read_operator(path: str) -> FiniteRankOperator:
    return parse_operator(read_text(path))


def _read_grid(path: str) -> PhaseSpaceFunction:
    return parse_grid(read_text(path))


def _residual_report(residual: float, tol: float) -> None:
    print(f"check residual {residual:.6e} (tol {tol:.6e})")
    if not (residual <= tol):
        raise CheckFailure(f"residual {residual:.6e} exceeds {tol:.6e}")


def _rel(err: float, scale: float) -> float:
    return err / scale if scale > 0 else err


# -- commands -----------------------------------------------------------------


def cmd_fixture(args, cfg) -> None:
    n = int(args.n if args.n is not None else cfg["n"])
    length = float(args.l if args.l is not None else cfg["l"])
    grid = GridSpec(n, length)
    kind = args.kind
    if kind == "gaussian":
        write_text(args.out, emit_signal(gaussian(grid)))
    elif kind == "state":
        write_text(args.out, emit_operator(random_state(grid, args.rank, args.seed)))
    elif kind == "projector":
        phi = gaussian(grid)
        write_text(args.out, emit_operator(FiniteRankOperator(grid, ((phi, phi),))))
    elif kind == "spike":
        write_text(args.out, emit_grid(delta_spike(grid)))
    elif kind == "psf-gaussian":
        t, w = grid.times, grid.freqs
        vals = np.exp(-np.pi * (t[:, None] ** 2 + w[None, :] ** 2)).astype(np.complex128)
        write_text(args.out, emit_grid(PhaseSpaceFunction(grid, vals)))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown fixture {kind!r}")


def cmd_wigner(args, cfg) -> None:
    tau = _tau(args, cfg)
    if len(args.inputs) not in (1, 2):
        raise UsageError("wigner expects one operator file or two signal files")
    if len(args.inputs) == 2:
        f = _read_signal(args.inputs[0])
        g = _read_signal(args.inputs[1])
        result = cross_wigner(f, g, tau)
        oracle = lambda: cross_wigner(f, g, tau, method="integral")  # noqa: E731
        grid = f.grid
    else:
        op = _read_operator(args.inputs[0])
        result = wigner_transform(op, tau)
        oracle = lambda: wigner_transform(op, tau, method="integral")  # noqa: E731
        grid = op.grid
    if args.out:
        write_text(args.out, emit_grid(PhaseSpaceFunction(grid, result.values)))
    if args.pgm:
        write_bytes(args.pgm, emit_pgm(result.values))
    if args.check:
        if grid.n > MAX_CHECK_N:
            raise GuardrailError(f"--check limited to N <= {MAX_CHECK_N}")
        ref = oracle()
        scale = float(np.max(np.abs(ref.values))) or 1.0
        _residual_report(
            _rel(float(np.max(np.abs(result.values - ref.values))), scale),
            args.check_tol if args.check_tol is not None else cfg["check-tol"],
        )


def cmd_quantize(args, cfg) -> None:
    tau = _tau(args, cfg)
    symbol = _read_grid(args.input)
    op = operator_from_symbol(symbol, tau)
    write_text(args.out, emit_operator(op.to_finite_rank(args.svd_tol)))
    if args.check:
        if symbol.grid.n > MAX_CHECK_N:
            raise GuardrailError(f"--check limited to N <= {MAX_CHECK_N}")
        back = wigner_transform(op, tau)
        scale = float(np.max(np.abs(symbol.values))) or 1.0
        _residual_report(
            _rel(float(np.max(np.abs(back.values - symbol.values))), scale),
            args.check_tol if args.check_tol is not None else cfg["check-tol"],
        )


def cmd_spread(args, cfg) -> None:
    tau = _tau(args, cfg)
    h = _read_grid(args.input)
    op = operator_from_spreading(h, tau)
    write_text(args.out, emit_operator(op.to_finite_rank(args.svd_tol)))
    if args.check:
        if h.grid.n > MAX_CHECK_N:
            raise GuardrailError(f"--check limited to N <= {MAX_CHECK_N}")
        ref = operator_from_spreading(h, tau, method="lattice")
        scale = float(np.max(np.abs(ref.kernel.values))) or 1.0
        _residual_report(
            _rel(float(np.max(np.abs(op.kernel.values - ref.kernel.values))), scale),
            args.check_tol if args.check_tol is not None else cfg["check-tol"],
        )


def _sniff_kind(path: str) -> str:
    head = read_text(path).split("\n", 1)[0].split()
    if len(head) >= 2 and head[0] == "QHA1":
        return head[1]
    raise FormatError(f"{path}: not a QHA1 file")


def cmd_conv(args, cfg) -> None:
    tau = _tau(args, cfg)
    kind_a = _sniff_kind(args.inputs[0])
    kind_b = _sniff_kind(args.inputs[1])
    tol = args.check_tol if args.check_tol is not None else cfg["check-tol"]
    if kind_a == "psf" and kind_b == "op":
        a = _read_grid(args.inputs[0])
        s = _read_operator(args.inputs[1])
        out = convolve_function_operator(a, s)
        write_text(args.out, emit_operator(out.to_finite_rank(args.svd_tol)))
        if args.check:
            if a.grid.n > MAX_CHECK_N:
                raise GuardrailError(f"--check limited to N <= {MAX_CHECK_N}")
            ref = convolve_function_operator(a, s, method="lattice")
            scale = float(np.max(np.abs(ref.kernel.values))) or 1.0
            _residual_report(
                _rel(float(np.max(np.abs(out.kernel.values - ref.kernel.values))), scale),
                tol,
            )
    elif kind_a == "op" and kind_b == "op":
        s = _read_operator(args.inputs[0])
        t = _read_operator(args.inputs[1])
        out = convolve_operators(s, t, tau)
        write_text(args.out, emit_grid(out))
        if args.check:
            if s.grid.n > 32:
                raise GuardrailError("--check for op x op limited to N <= 32")
            ref = convolve_operators(s, t, tau, method="trace")
            scale = float(np.max(np.abs(ref.values))) or 1.0
            _residual_report(
                _rel(float(np.max(np.abs(out.values - ref.values))), scale), tol
            )
    else:
        raise UsageError(f"conv expects (psf, op) or (op, op), got ({kind_a}, {kind_b})")


def cmd_cohen(args, cfg) -> None:
    tau = _tau(args, cfg)
    a = _read_grid(args.inputs[0])
    s = _read_operator(args.inputs[1])
    out = cohen_distribution(a, s, tau)
    write_text(args.out, emit_grid(out))
    if args.check:
        if a.grid.n > 32:
            raise GuardrailError("--check for cohen limited to N <= 32")
        ref = convolve_ps_direct(a, wigner_transform(s, tau))
        scale = float(np.max(np.abs(ref.values))) or 1.0
        _residual_report(
            _rel(float(np.max(np.abs(out.values - ref.values))), scale),
            args.check_tol if args.check_tol is not None else cfg["check-tol"],
        )


def cmd_gabor(args, cfg) -> None:
    op = _read_operator(args.inputs[0])
    window = _read_signal(args.inputs[1])
    diag = gabor_diagonal_function(op, window)
    write_text(args.out, emit_grid(PhaseSpaceFunction(op.grid, diag)))
    if args.check:
        m = gabor_matrix(op, window, stride=args.stride, force=args.force)
        rng = np.random.default_rng(0)
        sub = op.grid.n // args.stride
        worst = 0.0
        scale = float(np.max(np.abs(m.values))) or 1.0
        for _ in range(16):
            iz, kz, iw, kw = rng.integers(0, sub, size=4)
            z = LatticePoint.from_indices(op.grid, iz * args.stride, kz * args.stride)
            w = LatticePoint.from_indices(op.grid, iw * args.stride, kw * args.stride)
            direct = gabor_entry(op, window, z, w)
            worst = max(worst, abs(m.values[iz, kz, iw, kw] - direct))
        _residual_report(
            worst / scale,
            args.check_tol if args.check_tol is not None else cfg["check-tol"],
        )


def cmd_schwartz(args, cfg) -> None:
    tau = _tau(args, cfg)
    op = _read_operator(args.input)
    if op.grid.n > MAX_STFT4_N:
        raise GuardrailError(f"schwartz diagnostics limited to N <= {MAX_STFT4_N}")
    try:
        s_list = [float(x) for x in args.s_list.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --s-list {args.s_list!r}") from exc
    report = schwartz_score(op, s_list, tau)
    text = report.format_text()
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    if args.check:
        # the 4-index STFT behind the norms against its literal quadruple sum
        from .decay import gaussian_window_2d, stft_4d, stft_4d_direct
        from .quantize import wigner_transform as _wt

        if op.grid.n > 16:
            raise GuardrailError("--check for schwartz limited to N <= 16")
        w = _wt(op, tau)
        f = PhaseSpaceFunction(op.grid, w.values)
        win = gaussian_window_2d(op.grid)
        fast = stft_4d(f, win)
        direct = stft_4d_direct(f, win)
        scale = float(np.max(np.abs(direct))) or 1.0
        _residual_report(
            _rel(float(np.max(np.abs(fast - direct))), scale),
            args.check_tol if args.check_tol is not None else cfg["check-tol"],
        )


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qha", description=__doc__)
    p.add_argument("--config", help="key=value file overriding defaults")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, tau=True, check=True):
        if tau:
            sp.add_argument("--tau", type=float, default=None)
        if check:
            sp.add_argument("--check", action="store_true")
            sp.add_argument("--check-tol", type=float, default=None)

    sp = sub.add_parser("fixture", help="emit deterministic test inputs")
    sp.add_argument("kind", choices=["gaussian", "state", "projector", "spike", "psf-gaussian"])
    sp.add_argument("-o", "--out", required=True)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--l", type=float, default=None)
    sp.add_argument("--rank", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_fixture)

    sp = sub.add_parser("wigner", help="Wigner distribution of an operator or signal pair")
    sp.add_argument("inputs", nargs="+", help="operator file, or two signal files")
    sp.add_argument("-o", "--out", help="output grid file")
    sp.add_argument("--pgm", help="output heatmap file")
    add_common(sp)
    sp.set_defaults(func=cmd_wigner)

    sp = sub.add_parser("quantize", help="operator from a phase-space symbol")
    sp.add_argument("input")
    sp.add_argument("-o", "--out", required=True)
    sp.add_argument("--svd-tol", type=float, default=1e-12)
    add_common(sp)
    sp.set_defaults(func=cmd_quantize)

    sp = sub.add_parser("spread", help="operator from a spreading function")
    sp.add_argument("input")
    sp.add_argument("-o", "--out", required=True)
    sp.add_argument("--svd-tol", type=float, default=1e-12)
    add_common(sp)
    sp.set_defaults(func=cmd_spread)

    sp = sub.add_parser("conv", help="convolve function x operator or operator x operator")
    sp.add_argument("inputs", nargs=2)
    sp.add_argument("-o", "--out", required=True)
    sp.add_argument("--svd-tol", type=float, default=1e-12)
    add_common(sp)
    sp.set_defaults(func=cmd_conv)

    sp = sub.add_parser("cohen", help="Cohen-class distribution of an operator")
    sp.add_argument("inputs", nargs=2, help="kernel grid file and operator file")
    sp.add_argument("-o", "--out", required=True)
    add_common(sp)
    sp.set_defaults(func=cmd_cohen)

    sp = sub.add_parser("gabor", help="Gabor diagonal of an operator")
    sp.add_argument("inputs", nargs=2, help="operator file and window signal file")
    sp.add_argument("-o", "--out", required=True)
    sp.add_argument("--stride", type=int, default=1)
    sp.add_argument("--force", action="store_true")
    add_common(sp, tau=False)
    sp.set_defaults(func=cmd_gabor)

    sp = sub.add_parser("schwartz", help="weighted decay diagnostics of an operator")
    sp.add_argument("input")
    sp.add_argument("-o", "--out")
    sp.add_argument("--s-list", default="0,1,2,4")
    add_common(sp)
    sp.set_defaults(func=cmd_schwartz)

    return p


def _setup_threads() -> None:
    cap = os.environ.get("QHA_THREADS")
    if not cap:
        return
    try:
        n = max(1, int(cap))
    except ValueError:
        raise UsageError(f"QHA_THREADS must be an integer, got {cap!r}")
    if _kernels.HAVE_NUMBA:
        import numba

        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        _setup_threads()
        cfg = _load_config(args.config)
        args.func(args, cfg)
    except (UsageError, FormatError, GridError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GuardrailError as exc:
        print(f"guardrail: {exc}", file=sys.stderr)
        return EXIT_GUARDRAIL
    except CheckFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
