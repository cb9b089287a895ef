"""E-ticket operators for Airflow."""

from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING, Any

from airflow.exceptions import AirflowException
from airflow.models import BaseOperator

from elaunira.airflow.providers.eticket.hooks import ETicketHook

if TYPE_CHECKING:
    from airflow.utils.context import Context


class DoubleSpendDetectionOperator(BaseOperator):
    """
    Audit verifier logs for tickets shown twice.

    Same-verifier pairs are deanonymised and matched against the authority's
    registered users when the connection names an authority state file.

    :param vtable_paths: Verifier logs to scan (default: the hook's configured logs).
    :param eticket_conn_id: Airflow connection ID.
    :param fail_on_detection: Fail the task when any double spend is found.
    """

    template_fields: Sequence[str] = ("vtable_paths",)
    template_ext: Sequence[str] = ()
    ui_color = "#f0e8e4"

    def __init__(
        self,
        *,
        vtable_paths: list[str] | str | None = None,
        eticket_conn_id: str = "eticket_default",
        fail_on_detection: bool = False,
        **kwargs: Any,
    ) -> None:
        super().__init__(**kwargs)
        self.vtable_paths = [vtable_paths] if isinstance(vtable_paths, str) else vtable_paths
        self.eticket_conn_id = eticket_conn_id
        self.fail_on_detection = fail_on_detection

    def execute(self, context: Context) -> list[dict[str, Any]]:
        """Run the audit and return one dict per double-spent pair."""
        hook = ETicketHook(eticket_conn_id=self.eticket_conn_id)
        findings = hook.audit(self.vtable_paths)

        for finding in findings:
            if finding["same_verifier"]:
                self.log.warning(
                    "Double spend at %s by %s",
                    finding["verifier_id"],
                    finding["user_id"] or finding["public_key"],
                )
            else:
                self.log.warning(
                    "Serial %s shown at %s and %s",
                    finding["serial"][:16],
                    finding["verifier_id"],
                    finding["other_verifier_id"],
                )

        if findings and self.fail_on_detection:
            raise AirflowException(f"{len(findings)} double-spent ticket(s) found")

        self.log.info("Audited verifier logs, %d double-spent ticket(s)", len(findings))
        return findings
