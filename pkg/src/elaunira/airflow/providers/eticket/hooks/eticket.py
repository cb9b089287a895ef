"""E-ticket hook for Airflow."""

from __future__ import annotations

import os
from typing import TYPE_CHECKING, Any

from airflow.sdk.bases.hook import BaseHook

if TYPE_CHECKING:
    from elaunira.eticket.scheme import CAState, Params, VerifierTable


class ETicketHook(BaseHook):
    """
    Hook for reading published e-ticket parameters, verifier logs and authority state.

    Configuration priority:
        1. Airflow connection extras
        2. Environment variables (fallback)

    Airflow connection (extra JSON):
        {
            "params_path": "/srv/eticket/ca.params",
            "vtable_path": "/srv/eticket/verifier-gate-central.vtable",
            "ca_state_path": "/srv/eticket/ca.state"
        }

        vtable_path may list several logs separated by the platform path
        separator (":" on POSIX). ca_state_path is optional; without it
        double spenders are reported by public key only.

    Environment variables (fallback):
        - ETICKET_PARAMS_PATH
        - ETICKET_VTABLE_PATH
        - ETICKET_CA_STATE_PATH
    """

    conn_name_attr = "eticket_conn_id"
    default_conn_name = "eticket_default"
    conn_type = "eticket"
    hook_name = "E-Ticket"

    CONFIG_KEYS = [
        "params_path",
        "vtable_path",
        "ca_state_path",
    ]

    @classmethod
    def get_ui_field_behaviour(cls) -> dict[str, Any]:
        """Customize connection form UI."""
        return {
            "hidden_fields": ["host", "port", "schema", "login", "password", "extra"],
            "relabeling": {},
            "placeholders": {
                "params_path": "/srv/eticket/ca.params",
                "vtable_path": "/srv/eticket/verifier-gate-central.vtable",
                "ca_state_path": "/srv/eticket/ca.state",
            },
        }

    @classmethod
    def get_connection_form_widgets(cls) -> dict[str, Any]:
        """Define custom connection form widgets."""
        from flask_appbuilder.fieldwidgets import BS3TextFieldWidget
        from flask_babel import lazy_gettext
        from wtforms import StringField

        return {
            "params_path": StringField(
                lazy_gettext("Params Path"),
                widget=BS3TextFieldWidget(),
                description="Published parameters written by 'eticket setup'",
            ),
            "vtable_path": StringField(
                lazy_gettext("Verifier Log Path(s)"),
                widget=BS3TextFieldWidget(),
                description="One or more .vtable logs, separated by the path separator",
            ),
            "ca_state_path": StringField(
                lazy_gettext("Authority State Path"),
                widget=BS3TextFieldWidget(),
                description="Optional: authority state for naming double spenders",
            ),
        }

    def __init__(self, eticket_conn_id: str = default_conn_name) -> None:
        super().__init__()
        self.eticket_conn_id = eticket_conn_id
        self._params: Params | None = None

    def _get_config_from_env(self) -> dict[str, str | None]:
        """Get configuration from environment variables."""
        return {
            "params_path": os.environ.get("ETICKET_PARAMS_PATH"),
            "vtable_path": os.environ.get("ETICKET_VTABLE_PATH"),
            "ca_state_path": os.environ.get("ETICKET_CA_STATE_PATH"),
        }

    def _get_config_from_connection(self) -> dict[str, str | None] | None:
        """Get configuration from the Airflow connection extras."""
        try:
            extra = self.get_connection(self.eticket_conn_id).extra_dejson
            return {key: extra.get(key) for key in self.CONFIG_KEYS}
        except Exception as e:
            self.log.error("Failed to get config from connection: %s", e)
            return None

    def get_config(self) -> dict[str, str | None]:
        config = self._get_config_from_connection()
        if config is None or not config.get("params_path"):
            config = self._get_config_from_env()
        return config

    def get_conn(self) -> Params:
        """Load the published parameters."""
        if self._params is not None:
            return self._params

        from elaunira.eticket.wire import load_params

        path = self.get_config().get("params_path")
        if not path:
            raise ValueError("no params_path in the connection or ETICKET_PARAMS_PATH")
        self._params = load_params(path)
        return self._params

    def vtable_paths(self) -> list[str]:
        raw = self.get_config().get("vtable_path") or ""
        return [p for p in raw.split(os.pathsep) if p]

    def load_table(self, path: str) -> VerifierTable:
        from elaunira.eticket.wire import load_table

        return load_table(path, self.get_conn().group, repair=False)

    def load_ca_state(self) -> CAState | None:
        path = self.get_config().get("ca_state_path")
        if not path:
            return None

        from elaunira.eticket.scheme import CAState
        from elaunira.eticket.wire import decode_record

        with open(path, "rb") as f:
            return decode_record(CAState, f.read(), self.get_conn().group)

    def audit(self, paths: list[str] | None = None) -> list[dict[str, Any]]:
        """Scan verifier logs for double spending and deanonymise what can be.

        Each hit is reported with its serial commitment, verifier ids and,
        for same-verifier pairs, the recovered key and registered user id.
        """
        from elaunira.eticket.scheme import deanonymize, detect_double_spend

        ca_state = self.load_ca_state()
        users = {u.public_key: u.user_id for u in ca_state.users} if ca_state else {}
        findings = []
        for path in paths or self.vtable_paths():
            for hit in detect_double_spend(self.load_table(path)):
                finding: dict[str, Any] = {
                    "log": path,
                    "serial": hit.serial.encode().hex(),
                    "verifier_id": hit.first.verifier_id,
                    "other_verifier_id": hit.second.verifier_id,
                    "same_verifier": hit.same_verifier,
                    "public_key": None,
                    "user_id": None,
                }
                if hit.same_verifier:
                    public_key = deanonymize(hit)
                    finding["public_key"] = public_key.encode().hex()
                    finding["user_id"] = users.get(public_key)
                findings.append(finding)
        return findings
