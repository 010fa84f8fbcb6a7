from pathlib import Path

from django import forms

from design.conf import get_setting
from design.exceptions import ConfigError
from selection.models import RunConfig

PRIOR_CHOICES = [('constant', 'constant'), ('scott-berger', 'Scott-Berger'), ('hierarchical', 'hierarchical')]
HYPER_CHOICES = [('robust', 'robust'), ('zellner-siow', 'Zellner-Siow'), ('hyper-g-n', 'hyper-g/n')]
FORMAT_CHOICES = [('json', 'JSON'), ('text', 'text tables')]
DELIMITER_CHOICES = [('comma', 'comma'), ('tab', 'tab')]


class RunConfigForm(forms.Form):
    data = forms.CharField()
    schema = forms.CharField()
    prior = forms.ChoiceField(choices=PRIOR_CHOICES, required=False)
    hyper = forms.ChoiceField(choices=HYPER_CHOICES, required=False)
    out = forms.CharField(required=False)
    format = forms.ChoiceField(choices=FORMAT_CHOICES, required=False)
    top_n = forms.IntegerField(min_value=1, required=False)
    baseline_demo = forms.CharField(required=False)
    prior_audit = forms.BooleanField(required=False)
    delimiter = forms.ChoiceField(choices=DELIMITER_CHOICES, required=False)
    jobs = forms.IntegerField(min_value=-1, required=False)

    def _existing_file(self, field):
        path = Path(self.cleaned_data[field])
        if not path.is_file():
            raise forms.ValidationError(f'{field} file {path} does not exist')
        return path

    def clean_data(self):
        return self._existing_file('data')

    def clean_schema(self):
        return self._existing_file('schema')

    def clean_out(self):
        out = self.cleaned_data.get('out')
        if not out:
            return None
        path = Path(out)
        if not path.parent.is_dir():
            raise forms.ValidationError(f'output directory {path.parent} does not exist')
        return path

    def clean_jobs(self):
        jobs = self.cleaned_data.get('jobs')
        if jobs == 0:
            raise forms.ValidationError('jobs must be a positive count or -1 for all cores')
        return jobs

    def run_config(self):
        """The validated :class:`RunConfig`; raises ConfigError listing every invalid option."""
        if not self.is_valid():
            messages = [f'{field}: {" ".join(errors)}' for field, errors in self.errors.items()]
            raise ConfigError('; '.join(messages))
        data = self.cleaned_data
        return RunConfig(
            data_path=data['data'],
            schema_path=data['schema'],
            prior=data['prior'] or 'hierarchical',
            hyper=data['hyper'] or 'robust',
            out=data['out'],
            format=data['format'] or 'json',
            top_n=data['top_n'] or get_setting('TOP_N'),
            baseline_demo=data['baseline_demo'] or None,
            prior_audit=data['prior_audit'],
            delimiter=data['delimiter'] or 'comma',
            jobs=data['jobs'] or get_setting('N_JOBS'),
        )
