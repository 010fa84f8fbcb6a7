from django import forms


class ColumnListField(forms.CharField):
    """Comma separated names, returned as a list."""

    def to_python(self, value):
        value = super().to_python(value)
        return [item.strip() for item in value.split(',') if item.strip()]


class SchemaForm(forms.Form):
    response = forms.CharField()
    sure = ColumnListField(required=False)
    variables = ColumnListField(required=False)

    def __init__(self, *args, factors=(), **kwargs):
        super().__init__(*args, **kwargs)
        self.factor_names = list(factors)
        for name in self.factor_names:
            self.fields['factor:' + name] = ColumnListField(label=name)

    def clean(self):
        cleaned_data = super().clean()
        for name in self.factor_names:
            labels = cleaned_data.get('factor:' + name)
            if labels is None:
                continue
            if len(labels) < 2:
                self.add_error('factor:' + name, f'factor {name} needs at least 2 levels')
            elif len(set(labels)) != len(labels):
                self.add_error('factor:' + name, f'factor {name} declares a level twice')
        return cleaned_data

    def factor_columns(self):
        return tuple((name, tuple(self.cleaned_data['factor:' + name])) for name in self.factor_names)
