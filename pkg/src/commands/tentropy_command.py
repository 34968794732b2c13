from commands.base import Command, format_plain
from divergences.extreal import format_ext
from divergences.measure import require_same_space
from divergences.partition import atomic_partition
from dynsys.tentropy import t_entropy_n_supremum, t_entropy_profile
from utils.file_utils import load_measure, load_system

# tau_n by the partition definition is reported for n up to this bound
PARTITION_CHECK_N = 3


class TEntropyCommand(Command):
    """
    t-entropy profile of an invariant measure.
    """

    name = "tentropy"

    def run(self, config):
        operator, _ = load_system(config.system)
        mu = load_measure(config.mu, nonnegative=True)
        require_same_space(operator.space, mu.space)

        profile = t_entropy_profile(operator, mu, config.n_max, tol=config.tol)
        atomic = atomic_partition(mu.space)
        by_partitions = [
            t_entropy_n_supremum(operator, mu, n, atomic, iters=config.iters, mass_tol=config.tol)
            for n in range(1, min(config.n_max, PARTITION_CHECK_N) + 1)
        ]

        return {
            "n_max": profile.n_max,
            "tau_n": [format_ext(value) for value in profile.tau_n],
            "tau": format_ext(profile.tau),
            "kl_form": format_ext(profile.kl_form),
            "tau_n_partition_definition": [format_ext(value) for value in by_partitions],
            "constant_rate": profile.is_constant,
        }

    def render_plain(self, result):
        lines = [f"{'n':>4} {'tau_n':>20}"]
        lines += [f"{n:>4} {format_plain(value):>20}" for n, value in enumerate(result["tau_n"], start=1)]
        lines.append(f"tau(mu)               {format_plain(result['tau'])}")
        lines.append(f"-sup_n D_KL/n         {format_plain(result['kl_form'])}")
        by_partitions = " ".join(format_plain(value) for value in result["tau_n_partition_definition"])
        lines.append(f"tau_n (partitions)    {by_partitions}")
        return lines
