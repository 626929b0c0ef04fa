from django.db import models
from django.utils import timezone


class ExperimentRun(models.Model):
    command = models.CharField(max_length=32)
    seed = models.BigIntegerField()
    manifest_digest = models.CharField(max_length=40)
    output_path = models.CharField(max_length=1024, blank=True)
    passed = models.BooleanField()
    rows = models.PositiveIntegerField(default=0)
    created_at = models.DateTimeField(default=timezone.now)

    class Meta:
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['command', '-created_at'], name='experiments_command_5f2a1c_idx'),
        ]

    def __str__(self) -> str:  # pragma: no cover - debug representation
        status = 'pass' if self.passed else 'fail'
        return f'{self.command} seed={self.seed} {status} at {self.created_at.isoformat()}'
