from __future__ import annotations

from typing import Any, Mapping

from django import forms

from inequalities.bohnenblust import DISTRIBUTIONS
from inequalities.bohr import CLASSES

from .exceptions import ManifestError


DISTRIBUTION_CHOICES = [(name, name) for name in DISTRIBUTIONS]


class IntegerListField(forms.Field):
    """Comma-separated integers; an empty value is an empty list."""

    def __init__(self, *, min_value: int | None = None, **kwargs: Any) -> None:
        self.min_value = min_value
        kwargs.setdefault('required', False)
        super().__init__(**kwargs)

    def to_python(self, value: Any) -> list[int]:
        if value in self.empty_values:
            return []
        if isinstance(value, (list, tuple)):
            return [int(item) for item in value]
        try:
            return [int(item) for item in str(value).split(',') if item.strip()]
        except ValueError as exc:
            raise forms.ValidationError(f'expected comma-separated integers, got {value!r}') from exc

    def validate(self, value: list[int]) -> None:
        super().validate(value)
        if self.min_value is not None and any(item < self.min_value for item in value):
            raise forms.ValidationError(f'every entry must be >= {self.min_value}')


class ManifestForm(forms.Form):
    """Typed view of a manifest; missing keys take each field's initial value."""

    seed = forms.IntegerField(min_value=0, max_value=2 ** 63 - 1, initial=0)

    def __init__(self, entries: Mapping[str, str]) -> None:
        unknown = sorted(set(entries) - set(self.base_fields))
        if unknown:
            raise ManifestError(f'unknown manifest keys: {", ".join(unknown)}')
        data = {}
        for name, field in self.base_fields.items():
            if name in entries:
                data[name] = entries[name]
            elif field.initial is not None:
                data[name] = field.initial
        super().__init__(data)

    def validated(self) -> dict[str, Any]:
        if not self.is_valid():
            problems = '; '.join(f'{key}: {" ".join(messages)}' for key, messages in self.errors.items())
            raise ManifestError(f'invalid manifest: {problems}')
        return dict(self.cleaned_data)


class BhSweepForm(ManifestForm):
    n = IntegerListField(min_value=1, initial='1,2,3')
    d = IntegerListField(min_value=1, initial='1,2')
    seeds = forms.IntegerField(min_value=0, initial=100)
    kind = forms.ChoiceField(choices=[('quantum', 'quantum'), ('boolean', 'boolean'), ('both', 'both')], initial='quantum')
    homogeneous = forms.BooleanField(required=False, initial=False)
    distribution = forms.ChoiceField(choices=DISTRIBUTION_CHOICES, initial='rademacher')
    bh_bound_scale = forms.FloatField(min_value=0.0, initial=1.0)


class LearnForm(ManifestForm):
    n = forms.IntegerField(min_value=1, initial=4)
    d = forms.IntegerField(min_value=1, initial=1)
    eps = forms.FloatField(initial=0.1)
    delta = forms.FloatField(initial=0.05)
    bh_bound = forms.FloatField(required=False)
    trials = forms.IntegerField(min_value=0, initial=200)
    noise_std = forms.FloatField(min_value=0.0, initial=0.0)
    n_override = forms.IntegerField(min_value=1, required=False)
    b_override = forms.FloatField(required=False)
    a_override = forms.FloatField(required=False)
    observable = forms.CharField(required=False)
    hermitian = forms.BooleanField(required=False, initial=True)
    distribution = forms.ChoiceField(choices=DISTRIBUTION_CHOICES, initial='gaussian')
    min_success_rate = forms.FloatField(min_value=0.0, max_value=1.0, required=False)
    workers = forms.IntegerField(min_value=1, required=False)

    def clean(self) -> dict[str, Any]:
        cleaned = super().clean()
        n, d = cleaned.get('n'), cleaned.get('d')
        if n is not None and d is not None and d > n:
            raise forms.ValidationError(f'd={d} exceeds n={n}')
        return cleaned


class LiftVerifyForm(ManifestForm):
    n = forms.IntegerField(min_value=1, initial=2)
    d = forms.IntegerField(min_value=0, initial=2)
    instances = forms.IntegerField(min_value=0, initial=100)
    points = forms.IntegerField(min_value=0, initial=0)
    corrupt = forms.BooleanField(required=False, initial=False)
    observable = forms.CharField(required=False)


class BohrForm(ManifestForm):
    mode = forms.ChoiceField(choices=[('class', 'class'), ('check', 'check')], initial='class')
    n = IntegerListField(min_value=1, initial='1,2')
    d = forms.IntegerField(min_value=1, initial=1)
    ensemble = forms.IntegerField(min_value=0, initial=200)
    instances = forms.IntegerField(min_value=0, initial=100)
    observable = forms.CharField(required=False)


# ``class`` is a keyword, so the field is attached by name
BohrForm.base_fields['class'] = BohrForm.declared_fields['class'] = forms.ChoiceField(
    choices=[(name, name) for name in CLASSES], initial='all'
)


class GenForm(ManifestForm):
    n = forms.IntegerField(min_value=1, initial=2)
    d = forms.IntegerField(min_value=0, initial=1)
    homogeneous = forms.BooleanField(required=False, initial=False)
    distribution = forms.ChoiceField(choices=DISTRIBUTION_CHOICES, initial='rademacher')
    hermitian = forms.BooleanField(required=False, initial=True)

    def clean(self) -> dict[str, Any]:
        cleaned = super().clean()
        n, d = cleaned.get('n'), cleaned.get('d')
        if n is not None and d is not None and d > n:
            raise forms.ValidationError(f'd={d} exceeds n={n}')
        return cleaned


def validate_manifest(form_class: type[ManifestForm], entries: Mapping[str, str]) -> dict[str, Any]:
    return form_class(entries).validated()
