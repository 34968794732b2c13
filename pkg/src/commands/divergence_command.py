from commands.base import Command, format_plain, load_measure_pair
from divergences.divergence import closed_form, named_divergence
from divergences.extended_convex import parse_generator


class DivergenceCommand(Command):
    """
    Closed-form sup-sums divergence of nu relative to mu.
    """

    name = "divergence"

    def run(self, config):
        F = parse_generator(config.generator, config.alpha)
        mu, nu = load_measure_pair(config)

        # kl needs a nonnegative nu; the other generators accept signed measures
        if F.label == "kl":
            report = named_divergence("kl", mu, nu)
        else:
            report = closed_form(F, mu, nu)

        self.logger.info(f"D_{F.label}(mu, nu) = {report.value}")
        result = {"generator": F.label, "value": report.to_dict()["value"]}
        if config.report:
            result["report"] = report.to_dict()
        return result

    def render_plain(self, result):
        if "report" not in result:
            return [format_plain(result["value"])]
        report = result["report"]
        lines = [f"generator       {report['generator']}"]
        for key in ("value", "ac_term", "sing_plus_term", "sing_minus_term"):
            lines.append(f"{key:<15} {format_plain(report[key])}")
        for key, weights in report["decomposition"].items():
            lines.append(f"{key:<15} {' '.join(format_plain(w) for w in weights)}")
        return lines
