from commands.base import Command, format_plain, load_measure_pair
from divergences.measure import jordan_decompose, lebesgue_decompose, radon_nikodym


class DecomposeCommand(Command):
    """
    Jordan and Lebesgue decompositions of nu relative to mu, with the density of nu_a.
    """

    name = "decompose"

    def run(self, config):
        mu, nu = load_measure_pair(config)
        plus, minus = jordan_decompose(nu)
        lebesgue = lebesgue_decompose(nu, mu)
        density = radon_nikodym(lebesgue.nu_a, mu)

        return {
            "space": list(mu.space.atoms),
            "jordan": {
                "plus": plus.weights.tolist(),
                "minus": minus.weights.tolist(),
            },
            "lebesgue": {
                "nu_a": lebesgue.nu_a.weights.tolist(),
                "nu_s_plus": lebesgue.nu_s_plus.weights.tolist(),
                "nu_s_minus": lebesgue.nu_s_minus.weights.tolist(),
            },
            "density": density.values.tolist(),
        }

    def render_plain(self, result):
        rows = [
            ("atom", result["space"]),
            ("nu+", result["jordan"]["plus"]),
            ("nu-", result["jordan"]["minus"]),
            ("nu_a", result["lebesgue"]["nu_a"]),
            ("nu_s+", result["lebesgue"]["nu_s_plus"]),
            ("nu_s-", result["lebesgue"]["nu_s_minus"]),
            ("dnu_a/dmu", result["density"]),
        ]
        return [f"{label:<10} " + " ".join(f"{format_plain(v):>14}" for v in values) for label, values in rows]
