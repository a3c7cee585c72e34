from rest_framework import serializers

from expansions.serializers import ExpansionTermSerializer
from .predictions import PROVENANCE_CHOICES, term_label


class LargeZExpansionSerializer(serializers.Serializer):
    """Term table of a large-z expansion; ``re_alpha``/``im_alpha`` are the α of z^(−α)."""

    provenance = serializers.ChoiceField(choices=PROVENANCE_CHOICES, read_only=True)
    cutoff = serializers.FloatField(read_only=True, allow_null=True)
    terms = ExpansionTermSerializer(many=True, read_only=True)
    sources = serializers.SerializerMethodField()
    diagnostics = serializers.DictField(read_only=True)

    def get_sources(self, obj):
        return {
            term_label(alpha, k): list(labels)
            for (alpha, k), labels in sorted(obj.sources.items())
        }
