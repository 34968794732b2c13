from commands.base import Command, format_plain
from dynsys.variational import variational_check
from utils.file_utils import load_potential, load_system


class VariationalCommand(Command):
    """
    Spectral potential against the best invariant-vertex value.
    """

    name = "variational"

    def run(self, config):
        operator, phi = load_system(config.system)
        # an explicit --phi file overrides the system's own potential
        if config.phi:
            phi = load_potential(config.phi, operator.space)

        report = variational_check(operator, phi, tol=config.tol, n_max=config.n_max)
        return report.to_dict()

    def render_plain(self, result):
        cycle = " -> ".join(str(x) for x in result["cycle"])
        return [
            f"lambda (power)      {format_plain(result['lambda'])}",
            f"lambda (cycles)     {format_plain(result['lambda_cycles'])}",
            f"best vertex value   {format_plain(result['best'])}",
            f"argmax cycle        {result['argmax_cycle']} ({cycle})",
            f"gap                 {format_plain(result['gap'])}",
        ]
