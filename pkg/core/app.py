import logging
import sys
from typing import Sequence

from config.constants import ExitCodes
from core.errors import BoundViolated, LabError, ValidationError
from core.input_manager import Commands, ExperimentConfig, InputManager
from core.validation import ConfigValidator
from geometry.matrices import Mat2, principal_eigenvalue
from geometry.vectors import Vec2
from reports.formatting import Report, ReportRow, new_report
from reports.writer import write_report
from schedules.base import Schedule
from schedules.canonical import canonical_pair
from systems.analysis import all_thresholds, gronwall_audit, nonperiodic_experiment, parameter_sweep
from systems.direction_flow import integrate_direction, rotation_indicator
from systems.peano_baker import pb_tail_bound, pb_terms
from systems.propagation import floquet, trajectory
from systems.schedule_factory import ScheduleFactory


class ExperimentApp:
    """Command-line front end: parse, validate, run one experiment, write its report."""

    def __init__(self) -> None:
        self.input_manager = InputManager()

    def run(self, argv: Sequence[str] | None = None) -> int:
        """Run the command in argv and return the process exit code.

        The report is rendered in full before anything is written, so a failed
        run leaves no output file behind.
        """
        args = list(sys.argv[1:] if argv is None else argv)
        try:
            config = self.input_manager.parse(args)
            if config.verbose:
                logging.getLogger().setLevel(logging.DEBUG)
            ConfigValidator.validate(config)
            report = self.execute(config)
            write_report(report, config.format, config.output_path)
        except ValidationError as error:
            logging.error(f"Invalid input: {error}")
            return ExitCodes.VALIDATION
        except BoundViolated as error:
            logging.error(f"Bound violated: {error}")
            return ExitCodes.BOUND_VIOLATION
        except LabError as error:
            logging.error(f"Computation failed: {error}")
            return ExitCodes.RUNTIME_FAILURE
        except Exception as error:
            logging.exception(f"Unexpected failure: {error}")
            return ExitCodes.RUNTIME_FAILURE
        return ExitCodes.SUCCESS

    def execute(self, config: ExperimentConfig) -> Report:
        logging.info(f"Running {config.command}")
        match config.command:
            case Commands.ANALYZE:
                return self._analyze(config)
            case Commands.THRESHOLDS:
                return self._thresholds(config)
            case Commands.SWEEP:
                return self._sweep(config)
            case Commands.TRAJECTORY:
                return self._trajectory(config)
            case Commands.DIRECTIONS:
                return self._directions(config)
            case Commands.PEANO_BAKER:
                return self._peano_baker(config)
            case Commands.SMOOTH:
                return self._smooth(config)
            case Commands.NONPERIODIC:
                return self._nonperiodic(config)
            case _:
                raise ValidationError(f"command: unknown command {config.command!r}")

    @staticmethod
    def _periodic_schedule(config: ExperimentConfig) -> Schedule:
        factory = ScheduleFactory(config.c)
        if config.epsilon is None:
            return factory.create_schedule("canonical")
        return factory.create_schedule("smoothed", epsilon=config.epsilon)

    def _analyze(self, config: ExperimentConfig) -> Report:
        data = floquet(self._periodic_schedule(config), config.step)
        p = data.poincare
        report = new_report(config.command)
        report.add(ReportRow.of(
            c=config.c, mu1=data.mu1, mu2=data.mu2, principal_exponent=data.principal_exponent,
            p11=p.a11, p12=p.a12, p21=p.a21, p22=p.a22,
        ))
        return report

    def _thresholds(self, config: ExperimentConfig) -> Report:
        report = new_report(config.command)
        for threshold in all_thresholds(config.precision):
            report.add(ReportRow.of(name=threshold.name, c_star=threshold.c_star, residual=threshold.residual))
        return report

    def _sweep(self, config: ExperimentConfig) -> Report:
        report = new_report(config.command)
        for point in parameter_sweep(config.c_min, config.c_max, config.points):
            report.add(ReportRow.of(
                c=point.c, mu1=point.mu1, cone_lo=point.cone_lo, cone_hi=point.cone_hi,
                pb_lower_bound=point.pb_lower_bound,
            ))
        return report

    def _trajectory(self, config: ExperimentConfig) -> Report:
        schedule = self._periodic_schedule(config)
        x0 = ConfigValidator.initial_value(config)
        if x0 is None:
            x0 = floquet(schedule, config.step).w
        tr = trajectory(schedule, x0, 0.0, config.horizon, config.dt, config.step)

        report = new_report(config.command)
        for t, x, norm, angle, rate in zip(tr.times, tr.states, tr.norms, tr.angles, tr.radial_rates):
            report.add(ReportRow.of(t=t, x1=x.x1, x2=x.x2, norm=norm, angle=angle, radial_rate=rate))
        return report

    def _directions(self, config: ExperimentConfig) -> Report:
        a1: Mat2 = canonical_pair(config.c)[0]
        x0 = ConfigValidator.initial_value(config)
        y0 = Vec2(1.0, 0.0) if x0 is None else x0.normalized()
        path = integrate_direction(a1, y0, config.horizon, config.dt)

        report = new_report(config.command)
        for t, y, theta in zip(path.times, path.states, path.angles):
            report.add(ReportRow.of(t=t, theta=theta, sigma=rotation_indicator(a1, y)))
        return report

    def _peano_baker(self, config: ExperimentConfig) -> Report:
        report = new_report(config.command)
        partial = Mat2.zero()
        for k, term in enumerate(pb_terms(config.c, 2.0, config.terms)):
            partial = partial + term.evaluate(2.0)
            report.add(ReportRow.of(
                K=k, s11=partial.a11, s12=partial.a12, s21=partial.a21, s22=partial.a22,
                lambda1=principal_eigenvalue(partial), tail_bound=pb_tail_bound(config.c, k),
            ))
        return report

    def _smooth(self, config: ExperimentConfig) -> Report:
        study = gronwall_audit(config.c, ConfigValidator.epsilons(config), config.step)
        report = new_report(config.command)
        for eps, error, bound, mu in zip(study.epsilons, study.errors, study.bounds, study.mus):
            report.add(ReportRow.of(epsilon=eps, error=error, bound=bound, mu_eps=mu))
        return report

    def _nonperiodic(self, config: ExperimentConfig) -> Report:
        drift = ScheduleFactory.drift_from_document(config.drift)
        result = nonperiodic_experiment(
            config.c, ConfigValidator.horizon_periods(config), config.step, drift, config.dt,
        )
        report = new_report(config.command)
        for t, w, v in zip(result.times, result.w_states, result.v_states):
            report.add(ReportRow.of(
                t=t, w1=w.x1, w2=w.x2, v1=v.x1, v2=v.x2, norm_w=w.length(), norm_v=v.length(),
            ))
        return report
