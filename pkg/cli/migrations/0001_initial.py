# Generated by Django 5.2.5 on 2026-10-19 09:00

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ExperimentRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(max_length=20)),
                ('action', models.CharField(max_length=20)),
                ('config_hash', models.CharField(max_length=64)),
                ('seed', models.BigIntegerField(default=0)),
                ('exit_status', models.PositiveSmallIntegerField(default=0)),
                ('artifact_path', models.CharField(blank=True, max_length=500)),
                ('verdict', models.CharField(choices=[('ok', 'OK'), ('passed', 'Passed'), ('failed', 'Failed'), ('error', 'Error')], default='ok', max_length=10)),
                ('error_code', models.CharField(blank=True, max_length=40)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['command', 'action', '-created_at'], name='cli_run_command_idx'), models.Index(fields=['config_hash'], name='cli_run_config_hash_idx')],
            },
        ),
    ]
