"""``eticket`` command line.

Each protocol runs as its own subcommand against state files in the state
directory, so an authority, a seller, users and verifiers can be driven
step by step. ``demo`` runs everything in one process and ``bench`` times it.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from elaunira.eticket.cli.bench import MIN_ITERS, run_bench, write_csv
from elaunira.eticket.cli.demo import load_scenario, run_demo
from elaunira.eticket.config import Settings
from elaunira.eticket.exceptions import ConfigurationError, ETicketError
from elaunira.eticket.log import configure_logging
from elaunira.eticket.policy import SatisfiedPolicies, UserAttributes, load_attributes, load_universe
from elaunira.eticket.scheme import (
    CAState,
    CentralAuthority,
    Params,
    Seller,
    SellerState,
    User,
    UserState,
    Verifier,
    deanonymize,
    detect_double_spend,
    issue_ticket,
    register_seller,
    register_user,
    validate_ticket,
)
from elaunira.eticket.wire import decode_record, encode_record, load_params, load_table, save_params

logger = logging.getLogger(__name__)


class StateDir:
    """Paths and loaders for the files one state directory holds."""

    def __init__(self, root: Path) -> None:
        self.root = root

    @property
    def params_path(self) -> Path:
        return self.root / "ca.params"

    @property
    def ca_path(self) -> Path:
        return self.root / "ca.state"

    def seller_path(self, seller_id: str) -> Path:
        return self.root / f"seller-{seller_id}.state"

    def user_path(self, user_id: str) -> Path:
        return self.root / f"user-{user_id}.state"

    def vtable_path(self, verifier_id: str) -> Path:
        return self.root / f"verifier-{verifier_id}.vtable"

    def params(self) -> Params:
        if not self.params_path.exists():
            raise ConfigurationError(f"{self.params_path} not found, run 'eticket setup' first")
        return load_params(self.params_path)

    def load(self, cls: type, path: Path, params: Params):
        if not path.exists():
            raise ConfigurationError(f"{path} not found")
        return decode_record(cls, path.read_bytes(), params.group)

    def save(self, value, path: Path, params: Params) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        path.write_bytes(encode_record(value, params.group))

    def authority(self, settings: Settings) -> CentralAuthority:
        params = self.params()
        return CentralAuthority.from_state(params, self.load(CAState, self.ca_path, params), settings.rng(0))

    def save_authority(self, ca: CentralAuthority) -> None:
        save_params(ca.params, self.params_path)
        self.save(ca.state(), self.ca_path, ca.params)


def _settings(args: argparse.Namespace) -> Settings:
    return Settings.resolve(
        backend=args.backend,
        test_prime=args.test_prime,
        seed=args.seed,
        state_dir=args.state_dir,
        credential_validity=getattr(args, "validity", None),
        log_level=args.log_level,
    )


def cmd_setup(args: argparse.Namespace, settings: Settings, state: StateDir) -> int:
    universe = load_universe(args.policies)
    ca = CentralAuthority.setup(universe, settings.group_config(), settings.rng(0))
    state.save_authority(ca)
    print(f"Initialised {ca.group} in {state.root}")
    return 0


def cmd_register_seller(args: argparse.Namespace, settings: Settings, state: StateDir) -> int:
    ca = state.authority(settings)
    seller = Seller(ca.params, args.id, settings.rng(1))
    register_seller(ca, seller, settings.credential_validity)
    state.save_authority(ca)
    state.save(seller.state(), state.seller_path(args.id), ca.params)
    print(f"Registered seller {args.id}")
    return 0


def cmd_register_user(args: argparse.Namespace, settings: Settings, state: StateDir) -> int:
    ca = state.authority(settings)
    attributes = load_attributes(args.attributes) if args.attributes else UserAttributes()
    user = User(ca.params, args.id, attributes, settings.rng(2))
    register_user(ca, user, settings.credential_validity)
    state.save_authority(ca)
    state.save(user.state(), state.user_path(args.id), ca.params)
    print(f"Registered user {args.id}")
    return 0


def cmd_issue(args: argparse.Namespace, settings: Settings, state: StateDir) -> int:
    params = state.params()
    seller = Seller.from_state(params, state.load(SellerState, state.seller_path(args.seller), params), settings.rng(1))
    user_state = state.load(UserState, state.user_path(args.user), params)
    user = User.from_state(params, user_state, UserAttributes(), settings.rng(2))
    requested = SatisfiedPolicies(tuple(n.strip() for n in args.policies.split(",") if n.strip()))
    ticket = issue_ticket(
        user, seller, requested, service=args.service, price=args.price, validity=args.ticket_validity
    )
    state.save(user.state(), state.user_path(args.user), params)
    print(f"Issued ticket {len(user.tickets) - 1} ({ticket.service}, {ticket.price}) to {args.user}")
    return 0


def cmd_validate(args: argparse.Namespace, settings: Settings, state: StateDir) -> int:
    params = state.params()
    user_state = state.load(UserState, state.user_path(args.user), params)
    user = User.from_state(params, user_state, UserAttributes(), settings.rng(2))
    log_path = state.vtable_path(args.verifier)
    verifier = Verifier(
        params, args.verifier, settings.rng(3), table=load_table(log_path, params.group), log_path=log_path
    )
    ticket = user.tickets[args.ticket] if user.tickets else None
    validate_ticket(user, verifier, ticket)
    state.save(user.state(), state.user_path(args.user), params)
    print(f"Ticket accepted at {args.verifier}")
    return 0


def cmd_detect(args: argparse.Namespace, settings: Settings, state: StateDir) -> int:
    params = state.params()
    ca = state.authority(settings) if state.ca_path.exists() else None
    found = 0
    for verifier_id in args.verifier:
        hits = detect_double_spend(load_table(state.vtable_path(verifier_id), params.group))
        for hit in hits:
            found += 1
            if not hit.same_verifier:
                print(f"{verifier_id}: serial seen at {hit.first.verifier_id} and {hit.second.verifier_id}")
                continue
            public_key = deanonymize(hit)
            owner = ca.lookup_user(public_key) if ca is not None else None
            print(f"{verifier_id}: double spend by {owner or public_key.encode().hex()}")
    if not found:
        print("No double spending found")
    return 0


def cmd_demo(args: argparse.Namespace, settings: Settings, state: StateDir) -> int:
    report = run_demo(load_scenario(args.config), settings, echo=print)
    logger.debug("Demo finished with %d steps", len(report.steps))
    return 0


def cmd_bench(args: argparse.Namespace, settings: Settings, state: StateDir) -> int:
    rows = run_bench(
        settings,
        n_ranges=args.ranges,
        n_sets=args.sets,
        k=args.k,
        set_size=args.set_size,
        iters=args.iters,
        sweeps=not args.no_sweeps,
    )
    if args.out == "-":
        write_csv(rows, sys.stdout)
    else:
        with open(args.out, "w", newline="") as f:
            write_csv(rows, f)
        print(f"Wrote {len(rows)} rows to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Seed for reproducible runs (not secure).")
    common.add_argument("--backend", choices=["pairing", "exponent-test"], default=None)
    common.add_argument("--test-prime", type=int, default=None, help="Modulus of the exponent test backend.")
    common.add_argument("--state-dir", default=None, help="Directory of state files (default .eticket).")
    common.add_argument("--log-level", default=None, help="Logging level (default INFO).")

    parser = argparse.ArgumentParser(
        prog="eticket", description="Attribute-based e-tickets with double-spend detection."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", parents=[common], help="Initialise the authority.")
    p.add_argument("--policies", required=True, help="Policy universe TOML file.")
    p.set_defaults(func=cmd_setup)

    p = sub.add_parser("register-seller", parents=[common], help="Certify a seller.")
    p.add_argument("--id", required=True)
    p.add_argument("--validity", default=None)
    p.set_defaults(func=cmd_register_seller)

    p = sub.add_parser("register-user", parents=[common], help="Certify a user and their attributes.")
    p.add_argument("--id", required=True)
    p.add_argument("--attributes", default=None, help="TOML file with [ranges] and [sets].")
    p.add_argument("--validity", default=None)
    p.set_defaults(func=cmd_register_user)

    p = sub.add_parser("issue", parents=[common], help="Buy a ticket.")
    p.add_argument("--seller", required=True)
    p.add_argument("--user", required=True)
    p.add_argument("--policies", default="", help="Comma-separated policy names to prove.")
    p.add_argument("--service", required=True)
    p.add_argument("--price", required=True)
    p.add_argument("--ticket-validity", required=True)
    p.set_defaults(func=cmd_issue)

    p = sub.add_parser("validate", parents=[common], help="Show a ticket at a verifier.")
    p.add_argument("--user", required=True)
    p.add_argument("--verifier", required=True)
    p.add_argument("--ticket", type=int, default=-1, help="Index of the ticket to show (default newest).")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("detect", parents=[common], help="Scan verifier logs for double spending.")
    p.add_argument("--verifier", action="append", required=True)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("demo", parents=[common], help="Run the end-to-end scenario.")
    p.add_argument("--config", default=None, help="Scenario TOML file (default: bundled (2,4) scenario).")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("bench", parents=[common], help="Time each protocol phase.")
    p.add_argument("--ranges", type=int, default=2)
    p.add_argument("--sets", type=int, default=4)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--set-size", type=int, default=10)
    p.add_argument("--iters", type=int, default=MIN_ITERS)
    p.add_argument("--no-sweeps", action="store_true", help="Skip the digit-count and set-size sweeps.")
    p.add_argument("--out", default="-", help="CSV output path, '-' for stdout.")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bench" and args.iters < 1:
        parser.error("--iters must be at least 1")
    try:
        settings = _settings(args)
        configure_logging(settings.log_level)
        return args.func(args, settings, StateDir(settings.state_dir))
    except ETicketError as e:
        step = getattr(e, "step", args.command)
        logger.error("%s failed: %s", args.command, e)
        print(f"{args.command} failed at {step}: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        logger.error("%s failed: %s", args.command, e)
        print(f"{args.command} failed: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
