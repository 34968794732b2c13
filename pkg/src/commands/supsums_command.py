import numpy as np

from commands.base import Command, format_plain, load_measure_pair
from divergences.divergence import closed_form, partition_sum, supsum_estimate
from divergences.extended_convex import parse_generator
from divergences.extreal import NEG_INF, format_ext
from divergences.partition import atomic_partition, sample_partition


class SupsumsCommand(Command):
    """
    Compares the closed form with partition sums over the atomic and random partitions.
    """

    name = "supsums"

    def run(self, config):
        F = parse_generator(config.generator, config.alpha)
        mu, nu = load_measure_pair(config)

        closed = closed_form(F, mu, nu).value
        atomic = partition_sum(F, mu, nu, atomic_partition(mu.space))

        best_sampled = NEG_INF
        rng = np.random.default_rng(config.seed)
        for _ in range(config.samples):
            k = int(rng.integers(1, config.k_max + 1))
            best_sampled = max(best_sampled, partition_sum(F, mu, nu, sample_partition(mu.space, k, rng)))

        estimate = supsum_estimate(F, mu, nu, config.k_max, config.samples, config.seed)
        self.logger.info(f"sup-sums[{F.label}]: closed={closed}, atomic={atomic}, sampled={best_sampled}")
        return {
            "generator": F.label,
            "closed_form": format_ext(closed),
            "atomic_sum": format_ext(atomic),
            "best_sampled_sum": format_ext(best_sampled) if config.samples else None,
            "estimate": format_ext(estimate),
            "samples": config.samples,
            "k_max": config.k_max,
            "seed": config.seed,
        }

    def render_plain(self, result):
        keys = ("closed_form", "atomic_sum", "best_sampled_sum", "estimate")
        lines = [f"generator         {result['generator']}"]
        lines += [f"{key:<17} {format_plain(result[key])}" for key in keys]
        lines.append(f"samples           {result['samples']} (k <= {result['k_max']}, seed {result['seed']})")
        return lines
