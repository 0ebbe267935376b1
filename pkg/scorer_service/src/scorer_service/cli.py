"""Service entry points: serve, finetune, selfcheck."""

from __future__ import annotations

import argparse
import json
import logging
import sys


def _add_serve(subs):
    sub = subs.add_parser("serve", help="run the scoring service")
    sub.add_argument("--config", help="JSON file mirroring ServiceConfig")
    sub.add_argument("--model", help="checkpoint directory or hub id")
    sub.add_argument("--device")
    sub.add_argument("--host")
    sub.add_argument("--port", type=int)
    sub.add_argument("--max-batch-size", type=int)
    sub.add_argument("--max-seq-len", type=int)
    sub.add_argument("--entail-label")


def _add_finetune(subs):
    sub = subs.add_parser("finetune", help="binary fine-tune on labeled pairs")
    sub.add_argument("--base", required=True, help="base checkpoint or hub id")
    sub.add_argument("--instances", required=True, help="instances.jsonl")
    sub.add_argument("--labels", required=True, help="aggregated.jsonl")
    sub.add_argument("--out", required=True, help="checkpoint output directory")
    sub.add_argument("--epochs", type=int, default=10)
    sub.add_argument("--learning-rate", type=float, default=2e-5)
    sub.add_argument("--batch-size", type=int, default=8)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--holdout", type=float, default=0.2)
    sub.add_argument("--max-seq-len", type=int, default=256)
    sub.add_argument("--device", default="cpu")


def _add_selfcheck(subs):
    sub = subs.add_parser(
        "selfcheck", help="load a model and sanity-score an identity pair"
    )
    sub.add_argument("--model", required=True)
    sub.add_argument("--device", default="cpu")


def _build_config(args):
    from .config import ServiceConfig

    if args.config:
        config = ServiceConfig.from_file(args.config)
    elif args.model:
        config = ServiceConfig(model=args.model)
    else:
        raise SystemExit("serve needs --config or --model")
    for key in ("model", "device", "host", "port", "max_batch_size", "max_seq_len", "entail_label"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(config, key, value)
    return config


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    parser = argparse.ArgumentParser(prog="scorer-service")
    subs = parser.add_subparsers(dest="cmd", required=True)
    _add_serve(subs)
    _add_finetune(subs)
    _add_selfcheck(subs)
    args = parser.parse_args(argv)

    if args.cmd == "serve":
        import uvicorn

        from .app import create_app
        from .model import EntailmentModel

        config = _build_config(args)
        app = create_app(EntailmentModel(config))
        uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
        return 0

    if args.cmd == "finetune":
        from .finetune import finetune

        report = finetune(
            args.base,
            args.instances,
            args.labels,
            args.out,
            epochs=args.epochs,
            learning_rate=args.learning_rate,
            batch_size=args.batch_size,
            seed=args.seed,
            holdout=args.holdout,
            max_seq_len=args.max_seq_len,
            device=args.device,
        )
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
        return 0

    if args.cmd == "selfcheck":
        from .config import ServiceConfig
        from .model import EntailmentModel

        model = EntailmentModel(ServiceConfig(model=args.model, device=args.device))
        text = "the cat sat on the mat"
        prob = model.score_one(text, text)
        verdict = "ok" if prob > 0.5 else "SUSPICIOUS (identity pair not judged entailed)"
        print(json.dumps({"identity_entail_prob": prob, "verdict": verdict}))
        return 0

    return 1


if __name__ == "__main__":
    sys.exit(main())
