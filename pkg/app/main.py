import logging

import click

from app.core.config import settings
from app.core.logging_config import setup_logging
from app.cli import bounds, check, prove, roundtrip, solve, translate

logger = logging.getLogger(__name__)


@click.group(name="relevance-bvass", help=f"{settings.PROJECT_NAME}: relevance logic provers and branching VASS tools.")
@click.version_option(settings.VERSION, prog_name=settings.PROJECT_NAME)
@click.pass_context
def cli(ctx: click.Context) -> None:
    setup_logging()
    logger.debug(f"Running '{ctx.invoked_subcommand}' in {settings.ENVIRONMENT} environment")


cli.add_command(prove.prove)
cli.add_command(translate.translate)
cli.add_command(solve.solve)
cli.add_command(check.check)
cli.add_command(bounds.bounds)
cli.add_command(roundtrip.roundtrip)
