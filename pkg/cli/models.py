from django.db import models


class ExperimentRun(models.Model):
    """One invocation of a command recorded with --record"""
    VERDICT_CHOICES = [
        ('ok', 'OK'),
        ('passed', 'Passed'),
        ('failed', 'Failed'),
        ('error', 'Error'),
    ]

    command = models.CharField(max_length=20)
    action = models.CharField(max_length=20)
    config_hash = models.CharField(max_length=64)
    seed = models.BigIntegerField(default=0)
    exit_status = models.PositiveSmallIntegerField(default=0)
    artifact_path = models.CharField(max_length=500, blank=True)
    verdict = models.CharField(max_length=10, choices=VERDICT_CHOICES, default='ok')
    error_code = models.CharField(max_length=40, blank=True)

    # Timestamps
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['command', 'action', '-created_at'], name='cli_run_command_idx'),
            models.Index(fields=['config_hash'], name='cli_run_config_hash_idx'),
        ]

    def __str__(self):
        return f"{self.command} {self.action} [{self.verdict}]"

    @property
    def succeeded(self):
        return self.exit_status == 0
