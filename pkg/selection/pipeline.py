import logging

from design.exceptions import UsageError, ValidationFailure
from design.ingest import ingest
from design.schema import read_schema
from modelspace.models import ModelPriorScheme
from modelspace.priors import prior_mass_audit
from numerics.models import HyperGPrior
from posterior.enumerate import baseline_sensitivity_table, enumerate_posterior
from posterior.serializers import dumps_report
from posterior.tables import render_report
from validation.suites import render_summary, run_validation

logger = logging.getLogger(__name__)

APP_LOGGERS = ('design', 'numerics', 'bayesfactor', 'modelspace', 'posterior', 'validation', 'selection')
VERBOSITY_LEVELS = {0: logging.ERROR, 1: logging.WARNING, 2: logging.INFO, 3: logging.DEBUG}


def configure_verbosity(verbosity):
    level = VERBOSITY_LEVELS.get(verbosity, logging.DEBUG)
    for name in APP_LOGGERS:
        logging.getLogger(name).setLevel(level)


def run_select(config):
    """Ingest, enumerate and render one run; returns the rendered report (also written to ``config.out``)."""
    schema = read_schema(config.schema_path)
    if config.baseline_demo and config.baseline_demo not in schema.factor_names:
        raise UsageError(f'--baseline-demo names {config.baseline_demo}, which is not a factor of the schema')
    schema, assembly = ingest(config.data_path, schema, config.delimiter)
    hyper_prior = HyperGPrior.named(config.hyper)
    scheme = ModelPriorScheme.for_assembly(config.prior, assembly)
    report = enumerate_posterior(assembly, scheme, hyper_prior, top_n=config.top_n, n_jobs=config.jobs)
    baseline = None
    if config.baseline_demo:
        baseline = baseline_sensitivity_table(assembly, config.baseline_demo, scheme, hyper_prior, report=report,
                                              n_jobs=config.jobs)
    audit = prior_mass_audit(scheme) if config.prior_audit else None
    if config.format == 'text':
        rendered = render_report(report, baseline, audit)
    else:
        rendered = dumps_report(report, baseline, audit)
    if config.out:
        with open(config.out, 'w', encoding='utf-8', newline='\n') as handle:
            handle.write(rendered)
        logger.info('report written to %s', config.out)
    return rendered


def run_validate(suites=None, seed=None):
    """Run the validation suites; returns the summary table or raises ValidationFailure."""
    summary = run_validation(suites, seed)
    rendered = render_summary(summary)
    if not summary.passed:
        failed = ', '.join(f'{result.suite}/{result.name}' for result in summary.failures())
        raise ValidationFailure(f'{len(summary.failures())} validation checks failed: {failed}',
                                summary=rendered)
    return rendered
