"""Command-line entry points for the benchmark experiments.

Subcommands
-----------
fit           image fitting (signal representation)
ct            computed-tomography reconstruction from parallel-beam data
superres      4x super-resolution from block-downsampled measurements
conditioning  Gram-matrix spectra of the ReLU and dyadic wavelet systems
vnorm-sweep   scale sweep: PSNR vs total variation norm at equal loss

Defaults follow the per-task hyperparameter tables (see README). Exit
codes: 0 success, 1 configuration error, 2 I/O error, 3 numerical failure.
All randomness sits behind --seed; repeated runs write bitwise-identical
CSVs.
"""

import argparse
import math
import re
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import assets
from .activations import Activation
from .diagnostics import build_dyadic_gram, build_relu_gram, dyadic_system
from .errors import (
    BwinrError,
    ConfigurationError,
    ImageIOError,
    NumericalError,
)
from .images import load_image, save_image
from .network import save_checkpoint
from .operators import ImageGrid, make_task
from .training import TrainConfig, train

# Per-(task, activation) training defaults: learning rate, scale, decay,
# epochs, width, depth. Plain relu has no published setting and borrows
# the relu-pe learning rate of its task.
DEFAULTS = {
    ("ct", "bwrelu"): dict(lr=2e-3, scale=3.0),
    ("ct", "sine"): dict(lr=1e-3, scale=25.0),
    ("ct", "gauss"): dict(lr=5e-3, scale=10.0),
    ("ct", "relu-pe"): dict(lr=3e-3, scale=None),
    ("ct", "relu"): dict(lr=3e-3, scale=None),
    ("sigrep", "bwrelu"): dict(lr=4e-3, scale=9.0),
    ("sigrep", "sine"): dict(lr=2e-3, scale=50.0),
    ("sigrep", "gauss"): dict(lr=1e-3, scale=10.0),
    ("sigrep", "relu-pe"): dict(lr=4e-3, scale=None),
    ("sigrep", "relu"): dict(lr=4e-3, scale=None),
    ("superres", "bwrelu"): dict(lr=3e-3, scale=3.0),
    ("superres", "sine"): dict(lr=2e-3, scale=12.0),
    ("superres", "gauss"): dict(lr=3e-3, scale=6.0),
    ("superres", "relu-pe"): dict(lr=4e-3, scale=None),
    ("superres", "relu"): dict(lr=4e-3, scale=None),
}
TASK_DEFAULTS = {
    "ct": dict(epochs=10000, decay=0.1, width=300, depth=3),
    "sigrep": dict(epochs=1000, decay=0.1, width=300, depth=3),
    "superres": dict(epochs=2000, decay=0.2, width=256, depth=3),
}

_GENERATED_IMAGE = re.compile(r"^(shepp-logan|scene):(\d+)$")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(message)


def resolve_image(spec):
    """Either a path to a PGM/PNG file or 'shepp-logan:N' / 'scene:N'."""
    m = _GENERATED_IMAGE.match(spec)
    if m:
        name, size = m.group(1), int(m.group(2))
        if size < 4:
            raise ConfigurationError(f"generated image too small: {spec}")
        return assets.shepp_logan(size) if name == "shepp-logan" else assets.synthetic_scene(size)
    return load_image(spec)


def experiment_config(task_name, args):
    """Translate CLI flags into a validated TrainConfig."""
    base = TASK_DEFAULTS[task_name]
    act_name = args.act
    try:
        act_defaults = DEFAULTS[(task_name, act_name)]
    except KeyError:
        raise ConfigurationError(
            f"unknown activation {act_name!r} for task {task_name}"
        )
    scale = args.c if args.c is not None else act_defaults["scale"]
    kind = {"gauss": "gaussian", "relu-pe": "relu"}.get(act_name, act_name)
    activation = Activation(kind, scale if kind in ("bwrelu", "sine", "gaussian") else None)
    pe_levels = args.pe_levels if act_name == "relu-pe" else None
    return TrainConfig(
        activation=activation,
        epochs=args.epochs if args.epochs is not None else base["epochs"],
        lr0=args.lr if args.lr is not None else act_defaults["lr"],
        decay=args.decay if args.decay is not None else base["decay"],
        width=args.width if args.width is not None else base["width"],
        depth=args.layers if args.layers is not None else base["depth"],
        weight_decay=args.wd,
        seed=args.seed,
        log_every=args.log_every,
        pe_levels=pe_levels,
        target_loss=args.target_loss,
        track_feature_condition=args.track_cond,
        task_label=task_name,
    )


def _float_str(value):
    if value is None:
        return ""
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return repr(float(value))


def write_table(path, header, rows):
    """Write a CSV with deterministic float formatting."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, bool):
                cells.append(str(int(v)))
            elif isinstance(v, (int, np.integer)):
                cells.append(str(int(v)))
            elif v is None or isinstance(v, float):
                cells.append(_float_str(v))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_table(path):
    """Parse a CSV written by ``write_table`` into (header, rows of floats)."""
    lines = Path(path).read_text(encoding="ascii").splitlines()
    header = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        row = []
        for cell in ln.split(","):
            if cell == "":
                row.append(None)
            elif cell == "inf":
                row.append(math.inf)
            else:
                try:
                    row.append(float(cell))
                except ValueError:
                    row.append(cell)
        rows.append(row)
    return header, rows


def _write_variation_report(path, log):
    final = log.entries[-1]
    if final.vnorm_layers is None:
        return False
    rows = [(f"{i + 1}", v) for i, v in enumerate(final.vnorm_layers)]
    rows.append(("total", final.vnorm_total))
    write_table(path, ["layer", "vnorm"], rows)
    return True


def _run_experiment(task_name, args):
    image = resolve_image(args.image)
    extra = {}
    if task_name == "superres":
        extra["factor"] = args.factor
    if task_name == "ct":
        extra["n_angles"] = args.angles
    task = make_task(task_name, image, **extra)
    cfg = experiment_config(task_name, args)
    params, log = train(cfg, task)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    from .network import forward  # local import to keep CLI deps obvious
    from .training import prepare_inputs

    X = prepare_inputs(cfg, task)
    Y, _ = forward(params, X)
    recon = ImageGrid(np.clip(Y.reshape(task.render_shape), 0.0, 1.0))
    save_image(recon, out / "recon.pgm")
    (out / "log.csv").write_text(log.to_csv(), encoding="ascii")
    save_checkpoint(params, out / "checkpoint.txt")
    _write_variation_report(out / "vnorm.csv", log)

    if task_name == "ct":
        sino = task.meta["sinogram"]
        rows = [
            [sino.angles[i]] + sino.values[i].tolist()
            for i in range(sino.angles.size)
        ]
        header = ["angle"] + [f"d{i}" for i in range(sino.detectors)]
        write_table(out / "sinogram.csv", header, rows)
    if task_name == "superres":
        save_image(task.meta["low_res"], out / "lowres.pgm")

    final = log.entries[-1]
    snr = "n/a" if final.psnr is None else f"{final.psnr:.2f} dB"
    print(
        f"{task_name}: epochs={final.epoch} loss={final.loss:.3e} psnr={snr}"
        f" -> {out}"
    )
    return 0


def cmd_fit(args):
    return _run_experiment("sigrep", args)


def cmd_ct(args):
    return _run_experiment("ct", args)


def cmd_superres(args):
    return _run_experiment("superres", args)


def cmd_conditioning(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dyadic_rows = []
    for J in range(1, args.j_max + 1):
        report = build_dyadic_gram(J)
        system = dyadic_system(J)
        gram = report.matrix
        same1, same2, cross = [], [], []
        for a, (ja, ka) in enumerate(system):
            for b, (jb, kb) in enumerate(system):
                if a == b:
                    continue
                if ja == jb and abs(ka - kb) == 1:
                    same1.append(gram[a, b])
                elif ja == jb and abs(ka - kb) == 2:
                    same2.append(gram[a, b])
                elif ja != jb:
                    cross.append(abs(gram[a, b]))
        dyadic_rows.append([
            J, len(system),
            float(report.eigenvalues[0]), float(report.eigenvalues[-1]),
            report.condition.value, report.condition.floored,
            float(gram[0, 0]),
            float(np.mean(same1)) if same1 else None,
            float(np.mean(same2)) if same2 else None,
            float(np.max(cross)) if cross else None,
        ])
    write_table(
        out / "dyadic_gram.csv",
        ["J", "K", "lambda_min", "lambda_max", "kappa", "floored",
         "diag", "c1", "c2", "cross_scale_max"],
        dyadic_rows,
    )

    relu_rows = []
    for K in args.k_list:
        report = build_relu_gram(K)
        relu_rows.append([
            K,
            float(report.eigenvalues[0]), float(report.eigenvalues[-1]),
            report.condition.value, report.condition.floored,
        ])
    write_table(
        out / "relu_gram.csv",
        ["K", "lambda_min", "lambda_max", "kappa", "floored"],
        relu_rows,
    )
    kappas = [r[3] for r in relu_rows]
    if len(kappas) >= 2:
        slope = np.polyfit(np.log([r[0] for r in relu_rows]), np.log(kappas), 1)[0]
        print(f"relu gram: log-log kappa slope {slope:.3f} over K={args.k_list}")
    print(f"dyadic gram: max kappa {max(r[4] for r in dyadic_rows):.4f} "
          f"for J<={args.j_max} -> {out}")
    return 0


def run_vnorm_sweep(task, base_cfg, c_list, target_loss, lr_per_c=None):
    """Train one net per scale, early-stopped at the shared target loss.

    Returns rows (c, seed, epochs_run, loss, psnr, vnorm_total). Per-scale
    learning rates may be supplied to equalize the attained loss.
    """
    rows = []
    for i, c in enumerate(c_list):
        cfg = replace(
            base_cfg,
            activation=Activation("bwrelu", float(c)),
            target_loss=target_loss,
            lr0=lr_per_c[i] if lr_per_c else base_cfg.lr0,
        )
        _, log = train(cfg, task)
        final = log.entries[-1]
        rows.append((
            float(c), cfg.seed, final.epoch, final.loss, final.psnr,
            final.vnorm_total,
        ))
    return rows


def cmd_vnorm_sweep(args):
    image = resolve_image(args.image)
    task = make_task(args.task, image, n_angles=args.angles, factor=args.factor)
    cfg = experiment_config(args.task, args)
    if args.target_loss is None:
        raise ConfigurationError("vnorm-sweep requires --target-loss")
    rows = run_vnorm_sweep(task, cfg, args.c_list, args.target_loss)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_table(
        out / "sweep.csv",
        ["c", "seed", "epochs", "loss", "psnr", "vnorm_total"],
        rows,
    )
    best_psnr = max(rows, key=lambda r: r[4])
    best_vnorm = min(rows, key=lambda r: r[5])
    print(
        f"sweep: best psnr at c={best_psnr[0]} "
        f"({best_psnr[4]:.2f} dB), min vnorm at c={best_vnorm[0]} -> {out}"
    )
    return 0


def _add_common(p, with_act=True):
    if with_act:
        p.add_argument("--image", required=True,
                       help="PGM/PNG path, or shepp-logan:N / scene:N")
        p.add_argument("--act", default="bwrelu",
                       choices=["relu", "bwrelu", "sine", "gauss", "relu-pe"])
        p.add_argument("--c", type=float, default=None,
                       help="activation scale (c / omega0 / sigma0)")
        p.add_argument("--width", type=int, default=None)
        p.add_argument("--layers", type=int, default=None,
                       help="number of hidden layers")
        p.add_argument("--lr", type=float, default=None)
        p.add_argument("--decay", type=float, default=None)
        p.add_argument("--epochs", type=int, default=None)
        p.add_argument("--wd", type=float, default=0.0, help="weight decay")
        p.add_argument("--log-every", type=int, default=None)
        p.add_argument("--target-loss", type=float, default=None)
        p.add_argument("--pe-levels", type=int, default=10)
        p.add_argument("--track-cond", action="store_true",
                       help="log feature-Gram condition numbers")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out")


def _int_list(text):
    return [int(tok) for tok in text.split(",") if tok]


def _float_list(text):
    return [float(tok) for tok in text.split(",") if tok]


def build_parser():
    parser = _Parser(prog="bwinr", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit an image directly")
    _add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("ct", help="CT reconstruction")
    _add_common(p)
    p.add_argument("--angles", type=int, default=100)
    p.set_defaults(func=cmd_ct)

    p = sub.add_parser("superres", help="super-resolution")
    _add_common(p)
    p.add_argument("--factor", type=int, default=4)
    p.set_defaults(func=cmd_superres)

    p = sub.add_parser("conditioning", help="Gram spectra reports")
    _add_common(p, with_act=False)
    p.add_argument("--j-max", type=int, default=8)
    p.add_argument("--k-list", type=_int_list, default=[8, 16, 32, 64, 128, 256])
    p.set_defaults(func=cmd_conditioning)

    p = sub.add_parser("vnorm-sweep", help="PSNR vs variation norm over scales")
    _add_common(p)
    p.add_argument("--task", default="ct", choices=["ct", "sigrep", "superres"])
    p.add_argument("--angles", type=int, default=100)
    p.add_argument("--factor", type=int, default=4)
    p.add_argument("--c-list", type=_float_list, default=[1.0, 2.0, 3.0, 5.0])
    p.set_defaults(func=cmd_vnorm_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except ImageIOError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except BwinrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
