import django.utils.timezone
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='ExperimentRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(max_length=32)),
                ('seed', models.BigIntegerField()),
                ('manifest_digest', models.CharField(max_length=40)),
                ('output_path', models.CharField(blank=True, max_length=1024)),
                ('passed', models.BooleanField()),
                ('rows', models.PositiveIntegerField(default=0)),
                ('created_at', models.DateTimeField(default=django.utils.timezone.now)),
            ],
            options={
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['command', '-created_at'], name='experiments_command_5f2a1c_idx')],
            },
        ),
    ]
