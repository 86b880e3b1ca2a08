"""
Resource monitor for training runs.
Collects process CPU usage and memory so each epoch log line shows how the
run is loading the machine.

Dependencies:
- psutil for process and system statistics
"""

import psutil


class ResourceMonitor:
    """
    Process resource monitor.

    Used to annotate training progress logs with CPU and memory figures.
    """

    def __init__(self):
        """Initialize the monitor for the current process."""
        self.process = psutil.Process()
        # First call primes the CPU counter; it always reports 0.0
        self.process.cpu_percent(interval=None)

    def get_usage(self):
        """
        Gather current resource statistics.

        Returns:
            dict: Dictionary containing:
                - 'cpu_percent': Process CPU utilization since the last call
                - 'rss_mb': Resident memory of the process in megabytes
                - 'system_memory_percent': System-wide memory utilization
        """
        memory_info = self.process.memory_info()
        return {
            'cpu_percent': self.process.cpu_percent(interval=None),
            'rss_mb': memory_info.rss / (1024 * 1024),
            'system_memory_percent': psutil.virtual_memory().percent,
        }

    def format_usage(self):
        """Format current usage as a short log fragment."""
        usage = self.get_usage()
        return (f"cpu {usage['cpu_percent']:.0f}% rss {usage['rss_mb']:.0f} MB "
                f"mem {usage['system_memory_percent']:.0f}%")
