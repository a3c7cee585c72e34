import logging
from fractions import Fraction

from rest_framework import serializers

from expansions.serializers import (
    ExpansionTermSerializer, RationalField, check_duplicate_terms, term_items,
)
from expansions.terms import AT_ZERO, AsymptoticExpansion, Exponent
from zetafred.exceptions import ModelRejected
from .laws import PowerLaw, TableLaw, parse_formula, power_law_from_tail
from .spectra import SpectrumModel

logger = logging.getLogger(__name__)

JSON_ORACLES = ('log_det_zeta',)


class TailLawSerializer(serializers.Serializer):
    scale = RationalField(default=Fraction(1))
    shift = RationalField(default=Fraction(0))
    exponent = RationalField()
    multiplicity = serializers.IntegerField(min_value=1, default=1)


class EigenvalueLawSerializer(serializers.Serializer):
    kind = serializers.CharField()
    values = serializers.ListField(child=serializers.FloatField(), required=False)
    multiplicities = serializers.ListField(
        child=serializers.IntegerField(min_value=1), required=False,
    )
    tail = TailLawSerializer(required=False)

    def validate_kind(self, value):
        if value != 'table' and not value.startswith('formula:'):
            raise serializers.ValidationError('Kind must be "table" or "formula:<expression>".')
        return value

    def validate(self, attrs):
        if attrs['kind'] == 'table':
            if not attrs.get('values'):
                raise serializers.ValidationError('A table law needs a non-empty "values" list.')
            if 'tail' not in attrs:
                raise serializers.ValidationError('A table law needs a declared "tail" law.')
            multiplicities = attrs.get('multiplicities') or [1] * len(attrs['values'])
            if len(multiplicities) != len(attrs['values']):
                raise serializers.ValidationError('"multiplicities" must match "values" in length.')
            attrs['multiplicities'] = multiplicities
        elif 'values' in attrs:
            raise serializers.ValidationError('Formula laws do not take a "values" list.')
        return attrs


class SpectrumModelSerializer(serializers.Serializer):
    """Model JSON: name, eigenvalue law, kernel, Schatten order, declared heat terms, oracles."""

    name = serializers.CharField(max_length=64)
    description = serializers.CharField(required=False, allow_blank=True, default='')
    eigenvalues = EigenvalueLawSerializer()
    multiplicity = serializers.IntegerField(min_value=1, default=1)
    dim_ker = serializers.IntegerField(min_value=0, default=0)
    p = serializers.IntegerField(min_value=1)
    heat_terms = ExpansionTermSerializer(many=True)
    heat_cutoff = serializers.FloatField(allow_null=True, required=False, default=None)
    oracles = serializers.DictField(child=serializers.FloatField(), required=False, default=dict)

    def validate_heat_terms(self, value):
        check_duplicate_terms(value)
        for term in value:
            alpha = Exponent(term['re_alpha'], term['im_alpha'])
            if term['k'] > 0 and alpha.nonpositive_integer() is not None:
                raise serializers.ValidationError(
                    f'Declared term t^{alpha} log^{term["k"]} t violates k_{{-n}}=0.'
                )
        return value

    def validate_oracles(self, value):
        unknown = sorted(set(value) - set(JSON_ORACLES))
        if unknown:
            raise serializers.ValidationError(f'Unsupported oracles: {", ".join(unknown)}.')
        return value

    def create(self, validated_data):
        law_data = validated_data['eigenvalues']
        if law_data['kind'] == 'table':
            law = TableLaw(
                values=tuple(law_data['values']),
                multiplicities=tuple(law_data['multiplicities']),
                tail=power_law_from_tail(law_data['tail']),
            )
        else:
            law = parse_formula(law_data['kind'][len('formula:'):], validated_data['multiplicity'])
        expansion = AsymptoticExpansion.from_terms(
            AT_ZERO, term_items(validated_data['heat_terms']), validated_data['heat_cutoff'],
        )
        return SpectrumModel(
            name=validated_data['name'],
            law=law,
            schatten_p=validated_data['p'],
            heat_expansion=expansion,
            dim_ker=validated_data['dim_ker'],
            description=validated_data['description'],
            oracles=dict(validated_data['oracles']),
        )

    def to_representation(self, instance):
        law = instance.law
        eigenvalues = law.as_dict()
        eigenvalues.pop('multiplicity', None)
        oracles = {
            name: float(value)
            for name, value in instance.oracles.items()
            if name in JSON_ORACLES and not callable(value)
        }
        return {
            'name': instance.name,
            'description': instance.description,
            'eigenvalues': eigenvalues,
            'multiplicity': law.multiplicity if isinstance(law, PowerLaw) else 1,
            'dim_ker': instance.dim_ker,
            'p': instance.schatten_p,
            'heat_terms': ExpansionTermSerializer(instance.heat_expansion.terms, many=True).data,
            'heat_cutoff': instance.heat_expansion.cutoff,
            'oracles': oracles,
        }


def _describe(errors, prefix=''):
    parts = []
    if isinstance(errors, dict):
        for key, value in errors.items():
            label = key if key != 'non_field_errors' else ''
            parts.extend(_describe(value, f'{prefix}.{label}' if prefix and label else prefix or label))
    elif isinstance(errors, list):
        for item in errors:
            parts.extend(_describe(item, prefix))
    else:
        parts.append(f'{prefix}: {errors}' if prefix else str(errors))
    return parts


def load_model(payload):
    """SpectrumModel from model JSON; invariant violations raise ModelRejected."""
    if not isinstance(payload, dict):
        raise ModelRejected('Model JSON must be an object')
    serializer = SpectrumModelSerializer(data=payload)
    if not serializer.is_valid():
        message = '; '.join(_describe(serializer.errors))
        logger.warning(f'Rejected model {payload.get("name", "?")}: {message}')
        raise ModelRejected(message, errors=serializer.errors)
    try:
        return serializer.save()
    except ModelRejected as exc:
        logger.warning(f'Rejected model {payload.get("name", "?")}: {exc}')
        raise


def dump_model(model):
    return SpectrumModelSerializer(model).data
