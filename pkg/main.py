# main.py
from typing import Optional

import typer

from cli.commands import compare, eval_command, gradcheck, rerank, synth, train
from config.logging_config import setup_logging

app = typer.Typer(
    name="dca-metric",
    help="DCA metric learning 실험 도구",
    add_completion=False,
    no_args_is_help=True,
)


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(
        None, "--log-level", help="로그 레벨 (기본: DCA_LOG_LEVEL 또는 INFO)"
    ),
):
    setup_logging(log_level)


# 명령 등록
app.command("synth")(synth)
app.command("train")(train)
app.command("eval")(eval_command)
app.command("rerank")(rerank)
app.command("gradcheck")(gradcheck)
app.command("compare")(compare)


if __name__ == "__main__":
    app()
