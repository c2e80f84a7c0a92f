from avis.analysis.metrics import psnr, ssim, ssim_frame
from avis.analysis.efficiency import MetricsRow, COLUMNS, efficiency_report, metrics_row, write_metrics_csv
