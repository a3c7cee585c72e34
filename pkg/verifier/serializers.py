from rest_framework import serializers

from expansions.serializers import NumberField


class CheckRowSerializer(serializers.Serializer):
    check = serializers.CharField(read_only=True)
    z = NumberField()
    lhs = NumberField()
    rhs = NumberField()
    residual = NumberField()
    tolerance = serializers.FloatField(read_only=True)
    status = serializers.CharField(read_only=True)
    message = serializers.CharField(read_only=True)


class ConstantTermCheckSerializer(serializers.Serializer):
    fitted_constant = NumberField()
    minus_log_det_zeta = NumberField()
    difference = NumberField()
    fitted_log = NumberField()
    heat_constant = NumberField()
    log_difference = NumberField()
    tolerance = serializers.FloatField(read_only=True)
    passed = serializers.BooleanField(read_only=True)
    diagnostics = serializers.DictField(read_only=True)
    message = serializers.CharField(read_only=True)


class DeterminantReportSerializer(serializers.Serializer):
    model = serializers.CharField(read_only=True)
    p = serializers.IntegerField(read_only=True)
    z_grid = serializers.ListField(child=NumberField(), read_only=True)
    lhs = serializers.ListField(child=NumberField(allow_null=True), read_only=True)
    taylor_poly = serializers.ListField(child=NumberField(), read_only=True)
    rhs = serializers.ListField(child=NumberField(allow_null=True), read_only=True)
    residuals = serializers.ListField(child=NumberField(allow_null=True), read_only=True)
    max_residual = NumberField()
    tolerance = serializers.FloatField(read_only=True)
    log_det_zeta_check = CheckRowSerializer(read_only=True, allow_null=True)
    constant_term_check = ConstantTermCheckSerializer(read_only=True, allow_null=True)
    passed = serializers.BooleanField(read_only=True)
    rows = CheckRowSerializer(many=True, read_only=True)
