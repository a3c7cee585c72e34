from fractions import Fraction

import mpmath
from rest_framework import serializers

from .terms import DIRECTION_CHOICES, AsymptoticExpansion, rational


class RationalField(serializers.Field):
    """Exact rational read from a number or a string such as "-1/2"."""

    default_error_messages = {
        'invalid': 'A rational number or a string like "-1/2" is required.',
    }

    def to_internal_value(self, data):
        if isinstance(data, bool):
            self.fail('invalid')
        try:
            return rational(data)
        except (TypeError, ValueError, ZeroDivisionError, OverflowError):
            self.fail('invalid')

    def to_representation(self, value):
        value = Fraction(value)
        if value.denominator == 1:
            return value.numerator
        if value.denominator & (value.denominator - 1) == 0:
            return float(value)
        return str(value)


class MPRealField(serializers.Field):
    """Real number kept at the working mpmath precision; strings keep extra digits."""

    default_error_messages = {
        'invalid': 'A real number is required.',
    }

    def to_internal_value(self, data):
        if isinstance(data, bool):
            self.fail('invalid')
        try:
            value = mpmath.mpf(data)
        except (TypeError, ValueError):
            self.fail('invalid')
        if not mpmath.isfinite(value):
            self.fail('invalid')
        return value

    def to_representation(self, value):
        return float(value)


class ExpansionTermSerializer(serializers.Serializer):
    re_alpha = RationalField()
    im_alpha = RationalField(default=Fraction(0))
    k = serializers.IntegerField(min_value=0)
    re_c = MPRealField()
    im_c = MPRealField(default=mpmath.mpf(0))


def check_duplicate_terms(terms):
    seen = set()
    for term in terms:
        key = (term['re_alpha'], term['im_alpha'], term['k'])
        if key in seen:
            raise serializers.ValidationError(
                f'Duplicate term for alpha={term["re_alpha"]}+{term["im_alpha"]}i, k={term["k"]}.'
            )
        seen.add(key)
    return terms


def term_items(terms):
    """(alpha, k, coeff) triples from validated term data."""
    return [
        (
            (term['re_alpha'], term['im_alpha']),
            term['k'],
            mpmath.mpc(term['re_c'], term['im_c']),
        )
        for term in terms
    ]


class AsymptoticExpansionSerializer(serializers.Serializer):
    direction = serializers.ChoiceField(choices=DIRECTION_CHOICES)
    cutoff = serializers.FloatField(allow_null=True, required=False, default=None)
    terms = ExpansionTermSerializer(many=True)

    def validate_cutoff(self, value):
        if value is not None and value != value:
            raise serializers.ValidationError('Cutoff must be a number or null.')
        return value

    def validate_terms(self, value):
        return check_duplicate_terms(value)

    def create(self, validated_data):
        return AsymptoticExpansion.from_terms(
            validated_data['direction'], term_items(validated_data['terms']),
            validated_data.get('cutoff'),
        )


def load_expansion(payload):
    """Expansion from its JSON form; raises rest_framework ValidationError on bad input."""
    serializer = AsymptoticExpansionSerializer(data=payload)
    serializer.is_valid(raise_exception=True)
    return serializer.save()


def dump_expansion(expansion):
    return AsymptoticExpansionSerializer(expansion).data


class NumberField(serializers.Field):
    """Read-only real or complex number: a float, or [re, im] when the imaginary part is nonzero."""

    def __init__(self, **kwargs):
        kwargs['read_only'] = True
        super().__init__(**kwargs)

    def to_representation(self, value):
        value = mpmath.mpmathify(value)
        if isinstance(value, mpmath.mpc) and value.imag != 0:
            return [float(value.real), float(value.imag)]
        return float(mpmath.re(value))


class ComparisonRowSerializer(serializers.Serializer):
    key = serializers.CharField(read_only=True)
    predicted = NumberField()
    observed = NumberField()
    error = NumberField()
    tolerance = serializers.FloatField(read_only=True, allow_null=True)
    ok = serializers.BooleanField(read_only=True)


class ExpansionComparisonSerializer(serializers.Serializer):
    label = serializers.CharField(read_only=True)
    passed = serializers.BooleanField(read_only=True)
    slope = serializers.FloatField(read_only=True, allow_null=True)
    expected_slope = serializers.FloatField(read_only=True, allow_null=True)
    message = serializers.CharField(read_only=True)
    max_error = NumberField()
    rows = ComparisonRowSerializer(many=True, read_only=True)
